// Copyright 2026 The CSMG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "csmg/estimates_csv.hpp"
#include "csmg/record_io.hpp"
#include "csmg/run_config.hpp"
#include "csmg/stream_sim.hpp"

using namespace csmg;

namespace {

std::string temp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("csmg_io_" + name)).string();
}

std::int64_t error_offset(std::span<const std::uint8_t> bytes) {
    try {
        decode_record(bytes);
    } catch (const DataError &e) {
        return e.offset();
    }
    return -2;
}

}  // namespace

TEST(record_io, event_encoding) {
    EXPECT_EQ(static_cast<int>(make_event(MeasBasis::X, Outcome::Plus)), 0x02);
    EXPECT_EQ(static_cast<int>(make_event(MeasBasis::X, Outcome::Minus)), 0x03);
    EXPECT_EQ(static_cast<int>(make_event(MeasBasis::Y, Outcome::Plus)), 0x04);
    EXPECT_EQ(static_cast<int>(make_event(MeasBasis::Y, Outcome::Minus)), 0x05);
    EXPECT_EQ(static_cast<int>(make_event(MeasBasis::Z, Outcome::Plus)), 0x06);
    EXPECT_EQ(static_cast<int>(make_event(MeasBasis::Z, Outcome::Minus)), 0x07);
    for (int b = 0; b < 256; ++b) {
        EXPECT_EQ(is_valid_event_byte(static_cast<std::uint8_t>(b)), b == 0 || (b >= 2 && b <= 7)) << b;
    }
}

TEST(record_io, header_layout) {
    ClickRecord r;
    r.events = parse_events("Z+ Y- __");
    r.burn_in = 0x0102;
    auto bytes = encode_record(r);
    std::vector<std::uint8_t> want{'C', 'S', 'M', 'G', 1, 3, 0, 0, 0, 0, 0, 0, 0, 2, 1, 0, 0, 0, 0, 0, 0, 6, 5, 0};
    EXPECT_EQ(bytes, want);
}

TEST(record_io, round_trip_memory_and_file) {
    ExperimentConfig cfg;
    cfg.p_d = 0.6;
    cfg.q_x = 0.2;
    cfg.q_y = 0.5;
    cfg.q_z = 0.3;
    cfg.n_photons = 100000;
    auto r = simulate(cfg);
    auto back = decode_record(encode_record(r));
    EXPECT_EQ(back.events, r.events);
    EXPECT_EQ(back.burn_in, r.burn_in);
    auto path = temp_path("roundtrip.csmg");
    write_record(path, r);
    auto file = read_record(path);
    EXPECT_EQ(file.events, r.events);
    EXPECT_EQ(file.burn_in, r.burn_in);
    std::filesystem::remove(path);
}

TEST(record_io, diagnostics_carry_offsets) {
    ClickRecord r;
    r.events = parse_events("Z+ Y+ Y+ Z+");
    auto good = encode_record(r);
    auto bad_magic = good;
    bad_magic[2] = 'X';
    EXPECT_EQ(error_offset(bad_magic), 2);
    auto bad_version = good;
    bad_version[4] = 2;
    EXPECT_EQ(error_offset(bad_version), 4);
    auto truncated = good;
    truncated.pop_back();
    EXPECT_EQ(error_offset(truncated), 24);
    auto short_header = std::vector<std::uint8_t>(good.begin(), good.begin() + 10);
    EXPECT_EQ(error_offset(short_header), 10);
    auto trailing = good;
    trailing.push_back(0);
    EXPECT_EQ(error_offset(trailing), 25);
    auto invalid = good;
    invalid[23] = 0x01;
    EXPECT_EQ(error_offset(invalid), 23);
    try {
        decode_record(truncated);
        FAIL();
    } catch (const DataError &e) {
        EXPECT_NE(std::string(e.what()).find("byte offset 24"), std::string::npos) << e.what();
    }
}

TEST(record_io, streaming_reader_diagnostics) {
    ClickRecord r;
    r.events = parse_events("Z+ Y+ Y+ Z+ X- __");
    auto bytes = encode_record(r);
    bytes[21 + 4] = 0x09;
    std::string s(bytes.begin(), bytes.end());
    std::istringstream in(s);
    RecordReader reader(in);
    std::vector<Event> buf(2);
    EXPECT_EQ(reader.read(buf), 2u);
    EXPECT_EQ(reader.read(buf), 2u);
    try {
        reader.read(buf);
        FAIL();
    } catch (const DataError &e) {
        EXPECT_EQ(e.offset(), 25);
    }
}

TEST(record_io, fuzzed_bytes_are_rejected_with_positions) {
    std::mt19937_64 gen(1234);
    ClickRecord r;
    r.events.assign(200, Event::YPlus);
    auto good = encode_record(r);
    for (int trial = 0; trial < 2000; ++trial) {
        auto bytes = good;
        std::size_t pos = kRecordHeaderSize + gen() % r.events.size();
        std::uint8_t b;
        do {
            b = static_cast<std::uint8_t>(gen());
        } while (is_valid_event_byte(b));
        bytes[pos] = b;
        ASSERT_EQ(error_offset(bytes), static_cast<std::int64_t>(pos));
    }
    for (int trial = 0; trial < 2000; ++trial) {
        // Arbitrary corruption anywhere: either still a valid record or a
        // DataError pointing inside the buffer.
        auto bytes = good;
        bytes[gen() % bytes.size()] = static_cast<std::uint8_t>(gen());
        try {
            auto back = decode_record(bytes);
            ASSERT_EQ(back.events.size(), r.events.size());
        } catch (const DataError &e) {
            ASSERT_GE(e.offset(), 0);
            ASSERT_LE(e.offset(), static_cast<std::int64_t>(bytes.size()));
        }
    }
}

TEST(estimates_csv, round_trip) {
    std::vector<CorrelatorEstimate> v(2);
    v[0].template_id = "gamma1_l5";
    v[0].l = 5;
    v[0].match_count = 1000;
    v[0].signed_sum = 812;
    v[0].overlapping_matches = 37;
    v[1].template_id = "gamma2_l8";
    v[1].family = Family::Gamma2;
    v[1].l = 8;
    auto text = estimates_csv(v);
    EXPECT_EQ(text.substr(0, text.find('\n')), "template,l,n_matches,signed_sum,mean,stderr,overlap_fraction");
    std::istringstream in(text);
    auto back = read_estimates_csv(in);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].family, Family::Gamma1);
    EXPECT_EQ(back[0].match_count, 1000u);
    EXPECT_EQ(back[0].signed_sum, 812);
    EXPECT_EQ(back[0].overlapping_matches, 37u);
    EXPECT_EQ(back[1].family, Family::Gamma2);
    EXPECT_EQ(back[1].match_count, 0u);
    EXPECT_EQ(estimates_csv(back), text);
}

TEST(estimates_csv, rejects_malformed_rows) {
    auto parse = [](const std::string &body) {
        std::istringstream in(std::string(kEstimatesCsvHeader) + "\n" + body);
        return read_estimates_csv(in);
    };
    EXPECT_THROW(parse("gamma1_l5,5,10\n"), DataError);
    EXPECT_THROW(parse("gamma1_l5,8,10,10,1,0,0\n"), DataError);
    EXPECT_THROW(parse("gamma9_l5,5,10,10,1,0,0\n"), DataError);
    EXPECT_THROW(parse("gamma1_l5,5,10,11,1,0,0\n"), DataError);
    EXPECT_THROW(parse("gamma1_l5,5,10,9,1,0,0\n"), DataError);
    EXPECT_THROW(parse("gamma1_l5,5,x,9,1,0,0\n"), DataError);
    std::istringstream wrong_header("a,b,c\n");
    EXPECT_THROW(read_estimates_csv(wrong_header), DataError);
}

TEST(run_config, round_trip_and_unknown_keys) {
    RunConfig c;
    c.experiment.p_d = 0.4;
    c.experiment.n_photons = 123;
    c.families = {Family::Gamma2};
    c.ls = {2, 8};
    c.mode = ScanMode::NonOverlapping;
    auto back = run_config_from_json(to_json(c));
    EXPECT_EQ(back.experiment.p_d, 0.4);
    EXPECT_EQ(back.experiment.n_photons, 123u);
    EXPECT_EQ(back.families, c.families);
    EXPECT_EQ(back.ls, c.ls);
    EXPECT_EQ(back.mode, ScanMode::NonOverlapping);
    EXPECT_EQ(back.templates().size(), 2u);
    EXPECT_THROW(run_config_from_json({{"p_dd", 0.5}}), DataError);
    EXPECT_THROW(run_config_from_json({{"p_d", "high"}}), DataError);
    EXPECT_THROW(run_config_from_json({{"mode", "sideways"}}), DataError);
    EXPECT_THROW(run_config_from_json(nlohmann::json::array()), DataError);
    RunConfig bad;
    bad.ls = {4};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(run_config, load_from_file) {
    auto path = temp_path("config.json");
    {
        std::ofstream out(path);
        out << R"({"p_d": 0.25, "families": ["gamma1"], "l_max": 8})";
    }
    auto c = load_run_config(path);
    EXPECT_EQ(c.experiment.p_d, 0.25);
    EXPECT_EQ(c.templates().size(), 3u);
    {
        std::ofstream out(path);
        out << R"({"p_d": 0.25,, })";
    }
    EXPECT_THROW(load_run_config(path), DataError);
    std::filesystem::remove(path);
}
