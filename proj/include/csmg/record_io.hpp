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

#ifndef CSMG_RECORD_IO_HPP
#define CSMG_RECORD_IO_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "csmg/click_record.hpp"
#include "csmg/errors.hpp"

namespace csmg {

// CSMG record file:
//   offset 0   "CSMG" magic
//   offset 4   version byte (1)
//   offset 5   photon count, u64 little-endian
//   offset 13  burn-in count, u64 little-endian
//   offset 21  one event byte per photon (see Event)

inline constexpr std::array<std::uint8_t, 4> kRecordMagic{0x43, 0x53, 0x4D, 0x47};
inline constexpr std::uint8_t kRecordVersion = 0x01;
inline constexpr std::size_t kRecordHeaderSize = 21;

struct RecordHeader {
    std::uint64_t photon_count = 0;
    std::uint64_t burn_in = 0;
};

namespace detail {
inline void put_u64_le(std::uint8_t *out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out[i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
}
inline std::uint64_t get_u64_le(const std::uint8_t *in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    }
    return v;
}
}  // namespace detail

inline std::array<std::uint8_t, kRecordHeaderSize> encode_header(const RecordHeader &h) {
    std::array<std::uint8_t, kRecordHeaderSize> out{};
    std::memcpy(out.data(), kRecordMagic.data(), 4);
    out[4] = kRecordVersion;
    detail::put_u64_le(out.data() + 5, h.photon_count);
    detail::put_u64_le(out.data() + 13, h.burn_in);
    return out;
}

/// Validates a header from however many leading bytes were readable.
inline RecordHeader decode_header(std::span<const std::uint8_t> bytes) {
    for (std::size_t i = 0; i < 4; ++i) {
        if (i >= bytes.size()) {
            throw DataError("truncated record header", static_cast<std::int64_t>(bytes.size()));
        }
        if (bytes[i] != kRecordMagic[i]) {
            throw DataError("bad magic: not a CSMG record", static_cast<std::int64_t>(i));
        }
    }
    if (bytes.size() < 5) {
        throw DataError("truncated record header", static_cast<std::int64_t>(bytes.size()));
    }
    if (bytes[4] != kRecordVersion) {
        throw DataError("unsupported record version " + std::to_string(bytes[4]), 4);
    }
    if (bytes.size() < kRecordHeaderSize) {
        throw DataError("truncated record header", static_cast<std::int64_t>(bytes.size()));
    }
    RecordHeader h;
    h.photon_count = detail::get_u64_le(bytes.data() + 5);
    h.burn_in = detail::get_u64_le(bytes.data() + 13);
    return h;
}

/// Checks payload bytes; `base_offset` is the file offset of payload[0].
inline void validate_payload(std::span<const std::uint8_t> payload, std::uint64_t base_offset) {
    for (std::size_t i = 0; i < payload.size(); ++i) {
        if (!is_valid_event_byte(payload[i])) {
            throw DataError("invalid event byte " + std::to_string(payload[i]),
                            static_cast<std::int64_t>(base_offset + i));
        }
    }
}

inline std::vector<std::uint8_t> encode_record(const ClickRecord &record) {
    std::vector<std::uint8_t> out(kRecordHeaderSize + record.events.size());
    auto header = encode_header({record.events.size(), record.burn_in});
    std::memcpy(out.data(), header.data(), header.size());
    if (!record.events.empty()) {
        std::memcpy(out.data() + kRecordHeaderSize, record.events.data(), record.events.size());
    }
    return out;
}

inline ClickRecord decode_record(std::span<const std::uint8_t> bytes) {
    RecordHeader h = decode_header(bytes);
    std::uint64_t available = bytes.size() - kRecordHeaderSize;
    if (available < h.photon_count) {
        throw DataError("truncated payload: header declares " + std::to_string(h.photon_count) + " photons, found " +
                            std::to_string(available),
                        static_cast<std::int64_t>(bytes.size()));
    }
    if (available > h.photon_count) {
        throw DataError("payload longer than declared photon count",
                        static_cast<std::int64_t>(kRecordHeaderSize + h.photon_count));
    }
    auto payload = bytes.subspan(kRecordHeaderSize);
    validate_payload(payload, kRecordHeaderSize);
    ClickRecord record;
    record.burn_in = h.burn_in;
    record.events.resize(payload.size());
    if (!payload.empty()) {
        std::memcpy(record.events.data(), payload.data(), payload.size());
    }
    return record;
}

/// Streams a record file to disk without holding it in memory.
class RecordWriter {
   public:
    RecordWriter(const std::string &path, RecordHeader header) : path_(path), out_(path, std::ios::binary) {
        if (!out_) {
            throw std::runtime_error("cannot open " + path + " for writing");
        }
        auto bytes = encode_header(header);
        out_.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }

    void write(std::span<const Event> events) {
        out_.write(reinterpret_cast<const char *>(events.data()), static_cast<std::streamsize>(events.size()));
        if (!out_) {
            throw std::runtime_error("write to " + path_ + " failed");
        }
    }

    void close() {
        out_.close();
        if (!out_) {
            throw std::runtime_error("closing " + path_ + " failed");
        }
    }

   private:
    std::string path_;
    std::ofstream out_;
};

/// Streams events from a record, validating every byte.
class RecordReader {
   public:
    explicit RecordReader(std::istream &in) : in_(in) {
        std::array<std::uint8_t, kRecordHeaderSize> buf{};
        in_.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
        header_ = decode_header(std::span<const std::uint8_t>(buf.data(), static_cast<std::size_t>(in_.gcount())));
    }

    const RecordHeader &header() const {
        return header_;
    }
    std::uint64_t remaining() const {
        return header_.photon_count - consumed_;
    }

    /// Reads up to out.size() events; returns the count (0 at the end).
    /// At the end, verifies that no bytes follow the declared payload.
    std::size_t read(std::span<Event> out) {
        std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(out.size(), remaining()));
        if (want == 0) {
            check_trailing();
            return 0;
        }
        in_.read(reinterpret_cast<char *>(out.data()), static_cast<std::streamsize>(want));
        auto got = static_cast<std::size_t>(in_.gcount());
        std::uint64_t base = kRecordHeaderSize + consumed_;
        validate_payload(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t *>(out.data()), got), base);
        if (got < want) {
            throw DataError("truncated payload: header declares " + std::to_string(header_.photon_count) +
                                " photons, file ends after " + std::to_string(consumed_ + got),
                            static_cast<std::int64_t>(base + got));
        }
        consumed_ += got;
        return got;
    }

   private:
    void check_trailing() {
        if (checked_trailing_) {
            return;
        }
        checked_trailing_ = true;
        if (in_.peek() != std::char_traits<char>::eof()) {
            throw DataError("payload longer than declared photon count",
                            static_cast<std::int64_t>(kRecordHeaderSize + header_.photon_count));
        }
    }

    std::istream &in_;
    RecordHeader header_;
    std::uint64_t consumed_ = 0;
    bool checked_trailing_ = false;
};

inline void write_record(const std::string &path, const ClickRecord &record) {
    RecordWriter writer(path, {record.events.size(), record.burn_in});
    writer.write(record.events);
    writer.close();
}

inline ClickRecord read_record(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    RecordReader reader(in);
    ClickRecord record;
    record.burn_in = reader.header().burn_in;
    record.events.resize(reader.header().photon_count);
    std::span<Event> rest(record.events);
    while (!rest.empty()) {
        std::size_t n = reader.read(rest);
        rest = rest.subspan(n);
    }
    reader.read({});
    return record;
}

}  // namespace csmg

#endif  // CSMG_RECORD_IO_HPP
