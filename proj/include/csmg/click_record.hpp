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

#ifndef CSMG_CLICK_RECORD_HPP
#define CSMG_CLICK_RECORD_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "csmg/errors.hpp"
#include "csmg/frame.hpp"

namespace csmg {

/// One detector event. The numeric value is the on-disk byte:
/// 0 = lost, otherwise bits 2..1 hold the basis (X=1, Y=2, Z=3) and bit 0
/// is set for outcome -1.
enum class Event : std::uint8_t {
    Lost = 0x00,
    XPlus = 0x02,
    XMinus = 0x03,
    YPlus = 0x04,
    YMinus = 0x05,
    ZPlus = 0x06,
    ZMinus = 0x07,
};

inline constexpr Event make_event(MeasBasis basis, Outcome outcome) {
    return static_cast<Event>((static_cast<std::uint8_t>(basis) << 1) | (outcome == Outcome::Minus ? 1 : 0));
}

inline constexpr bool is_valid_event_byte(std::uint8_t b) {
    return b == 0 || (b >= 0x02 && b <= 0x07);
}

inline constexpr bool is_lost(Event e) {
    return e == Event::Lost;
}

/// Only meaningful for detected events.
inline constexpr MeasBasis basis_of(Event e) {
    return static_cast<MeasBasis>(static_cast<std::uint8_t>(e) >> 1);
}

inline constexpr Outcome outcome_of(Event e) {
    return (static_cast<std::uint8_t>(e) & 1) ? Outcome::Minus : Outcome::Plus;
}

/// "Z+", "Y-", "__" for lost.
inline std::string event_str(Event e) {
    if (is_lost(e)) {
        return "__";
    }
    return std::string(1, basis_char(basis_of(e))) + (outcome_of(e) == Outcome::Minus ? "-" : "+");
}

/// Parses whitespace-separated tokens like "Z+ Y- __" (handy in tests).
inline std::vector<Event> parse_events(std::string_view text) {
    std::vector<Event> out;
    std::size_t k = 0;
    while (k < text.size()) {
        if (text[k] == ' ' || text[k] == '\t' || text[k] == '\n') {
            ++k;
            continue;
        }
        if (k + 1 >= text.size()) {
            throw std::invalid_argument("truncated event token in '" + std::string(text) + "'");
        }
        char b = text[k], o = text[k + 1];
        if (b == '_' && o == '_') {
            out.push_back(Event::Lost);
        } else {
            MeasBasis basis;
            switch (b) {
                case 'X':
                    basis = MeasBasis::X;
                    break;
                case 'Y':
                    basis = MeasBasis::Y;
                    break;
                case 'Z':
                    basis = MeasBasis::Z;
                    break;
                default:
                    throw std::invalid_argument(std::string("bad event basis '") + b + "'");
            }
            if (o != '+' && o != '-') {
                throw std::invalid_argument(std::string("bad event outcome '") + o + "'");
            }
            out.push_back(make_event(basis, o == '-' ? Outcome::Minus : Outcome::Plus));
        }
        k += 2;
    }
    return out;
}

/// The click record of one continuous photon stream. The first `burn_in`
/// events are kept but skipped by analysis by default.
struct ClickRecord {
    std::vector<Event> events;
    std::uint64_t burn_in = 0;

    std::size_t size() const {
        return events.size();
    }
    bool operator==(const ClickRecord &) const = default;
};

}  // namespace csmg

#endif  // CSMG_CLICK_RECORD_HPP
