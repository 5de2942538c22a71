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


#ifndef CSMG_ESTIMATES_CSV_HPP
#define CSMG_ESTIMATES_CSV_HPP

#include <charconv>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "csmg/errors.hpp"
#include "csmg/scan.hpp"

namespace csmg {

// Column order is fixed; downstream plotting depends on it.
inline constexpr const char *kEstimatesCsvHeader = "template,l,n_matches,signed_sum,mean,stderr,overlap_fraction";

inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

inline void write_estimates_csv(std::ostream &out, const std::vector<CorrelatorEstimate> &estimates) {
    out << kEstimatesCsvHeader << '\n';
    for (const auto &e : estimates) {
        out << e.template_id << ',' << e.l << ',' << e.match_count << ',' << e.signed_sum << ','
            << format_double(e.mean()) << ',' << format_double(e.std_error()) << ','
            << format_double(e.overlap_fraction()) << '\n';
    }
}

inline std::string estimates_csv(const std::vector<CorrelatorEstimate> &estimates) {
    std::ostringstream out;
    write_estimates_csv(out, estimates);
    return out.str();
}

namespace detail {
template <typename T>
T parse_integer_field(const std::string &s, std::int64_t line, const char *name) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError("line " + std::to_string(line) + ": bad " + name + " '" + s + "'");
    }
    return v;
}
}  // namespace detail

/// Reads the estimates CSV. Counts are authoritative; the derived columns
/// (mean, stderr, overlap_fraction) are recomputed. The overlap count is
/// recovered from overlap_fraction * n_matches.
inline std::vector<CorrelatorEstimate> read_estimates_csv(std::istream &in) {
    std::vector<CorrelatorEstimate> out;
    std::string line;
    std::int64_t line_no = 0;
    if (!std::getline(in, line)) {
        throw DataError("empty estimates file");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kEstimatesCsvHeader) {
        throw DataError("unexpected estimates header '" + line + "'");
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            fields.push_back(f);
        }
        if (fields.size() != 7) {
            throw DataError("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                            std::to_string(fields.size()));
        }
        CorrelatorEstimate e;
        e.template_id = fields[0];
        auto underscore = fields[0].find("_l");
        if (underscore == std::string::npos) {
            throw DataError("line " + std::to_string(line_no) + ": bad template id '" + fields[0] + "'");
        }
        try {
            e.family = parse_family(fields[0].substr(0, underscore));
        } catch (const std::invalid_argument &) {
            throw DataError("line " + std::to_string(line_no) + ": unknown family in '" + fields[0] + "'");
        }
        e.l = detail::parse_integer_field<std::int64_t>(fields[1], line_no, "l");
        if (!is_valid_separation(e.l) || fields[0] != make_template(e.family, e.l).id()) {
            throw DataError("line " + std::to_string(line_no) + ": template id and l disagree");
        }
        e.match_count = detail::parse_integer_field<std::uint64_t>(fields[2], line_no, "n_matches");
        e.signed_sum = detail::parse_integer_field<std::int64_t>(fields[3], line_no, "signed_sum");
        if (static_cast<std::uint64_t>(e.signed_sum < 0 ? -e.signed_sum : e.signed_sum) > e.match_count ||
            (e.match_count - static_cast<std::uint64_t>(e.signed_sum < 0 ? -e.signed_sum : e.signed_sum)) % 2 != 0) {
            throw DataError("line " + std::to_string(line_no) + ": signed_sum inconsistent with n_matches");
        }
        double frac = 0;
        try {
            frac = std::stod(fields[6]);
        } catch (const std::exception &) {
            throw DataError("line " + std::to_string(line_no) + ": bad overlap_fraction '" + fields[6] + "'");
        }
        e.overlapping_matches = static_cast<std::uint64_t>(std::llround(frac * static_cast<double>(e.match_count)));
        out.push_back(e);
    }
    return out;
}

}  // namespace csmg

#endif  // CSMG_ESTIMATES_CSV_HPP
