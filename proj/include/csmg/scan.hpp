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

#ifndef CSMG_SCAN_HPP
#define CSMG_SCAN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "csmg/click_record.hpp"
#include "csmg/templates.hpp"

namespace csmg {

enum class ScanMode : std::uint8_t { Overlapping, NonOverlapping };

inline std::string scan_mode_name(ScanMode m) {
    return m == ScanMode::Overlapping ? "overlapping" : "non-overlapping";
}

inline ScanMode parse_scan_mode(const std::string &s) {
    if (s == "overlapping" || s == "all") {
        return ScanMode::Overlapping;
    }
    if (s == "non-overlapping" || s == "nonoverlapping" || s == "greedy") {
        return ScanMode::NonOverlapping;
    }
    throw std::invalid_argument("unknown scan mode '" + s + "'");
}

struct ScanOptions {
    ScanMode mode = ScanMode::Overlapping;
    // Instances must start at or after the record's burn-in.
    bool skip_burn_in = true;
};

/// Accumulated outcome products of one template over a record.
struct CorrelatorEstimate {
    std::string template_id;
    Family family = Family::Gamma1;
    std::int64_t l = 0;
    std::uint64_t match_count = 0;
    std::int64_t signed_sum = 0;
    // Matches starting less than one span after the previous counted match.
    std::uint64_t overlapping_matches = 0;

    double mean() const {
        return match_count == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : static_cast<double>(signed_sum) / static_cast<double>(match_count);
    }
    /// sqrt((1 - mean^2) / n), treating instances as independent.
    double std_error() const {
        if (match_count == 0) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        double m = mean();
        return std::sqrt(std::max(0.0, 1.0 - m * m) / static_cast<double>(match_count));
    }
    double overlap_fraction() const {
        return match_count == 0 ? 0.0 : static_cast<double>(overlapping_matches) / static_cast<double>(match_count);
    }

    CorrelatorEstimate &operator+=(const CorrelatorEstimate &other) {
        match_count += other.match_count;
        signed_sum += other.signed_sum;
        overlapping_matches += other.overlapping_matches;
        return *this;
    }
};

/// Shift-and (bitap) matcher for one wildcard template with an outcome-parity
/// lane. Bit j of the state is set while the instance that started j events
/// ago still matches; the parity lane holds the XOR of its -1 outcomes.
/// Constant work per event, independent of how many candidates are live.
class TemplateMatcher {
   public:
    /// Counts instances starting in [count_from, count_until); instances
    /// starting at or after `track_from` only feed overlap bookkeeping.
    TemplateMatcher(const Template &t, ScanMode mode, std::uint64_t count_from, std::uint64_t count_until,
                    std::uint64_t track_from, std::uint64_t first_position)
        : template_(t),
          mode_(mode),
          count_from_(count_from),
          count_until_(count_until),
          track_from_(track_from),
          position_(first_position) {
        if (t.span() == 0) {
            throw std::invalid_argument("empty template");
        }
        words_ = (t.span() + 63) / 64;
        for (auto &m : accept_) {
            m.assign(words_, 0);
        }
        toggle_.assign(words_, 0);
        state_.assign(words_, 0);
        parity_.assign(words_, 0);
        for (std::size_t p = 0; p < t.span(); ++p) {
            std::uint64_t bit = std::uint64_t{1} << (p % 64);
            std::size_t w = p / 64;
            for (std::uint8_t code = 0; code < 8; ++code) {
                if (!is_valid_event_byte(code)) {
                    continue;
                }
                Event e = static_cast<Event>(code);
                bool ok = t.slots[p] == Slot::Free ||
                          (!is_lost(e) && basis_letter(basis_of(e)) == slot_letter(t.slots[p]));
                if (ok) {
                    accept_[code][w] |= bit;
                }
            }
            if (t.slots[p] != Slot::Free) {
                toggle_[w] |= bit;
            }
        }
        top_word_ = (t.span() - 1) / 64;
        top_bit_ = std::uint64_t{1} << ((t.span() - 1) % 64);
        estimate_.template_id = t.id();
        estimate_.family = t.family;
        estimate_.l = t.l;
    }

    void feed(std::span<const Event> events) {
        if (words_ == 1) {
            feed_single_word(events);
        } else {
            feed_multi_word(events);
        }
    }

    const CorrelatorEstimate &estimate() const {
        return estimate_;
    }
    std::uint64_t position() const {
        return position_;
    }

   private:
    void feed_single_word(std::span<const Event> events) {
        std::uint64_t state = state_[0], parity = parity_[0];
        const std::uint64_t toggle = toggle_[0];
        for (Event e : events) {
            auto code = static_cast<std::uint8_t>(e);
            state = ((state << 1) | 1) & accept_[code & 7][0];
            parity = (parity << 1) ^ ((code & 1) ? toggle : 0);
            if (state & top_bit_) {
                if (on_match((parity & top_bit_) != 0)) {
                    state = 0;
                }
            }
            ++position_;
        }
        state_[0] = state;
        parity_[0] = parity;
    }

    void feed_multi_word(std::span<const Event> events) {
        for (Event e : events) {
            auto code = static_cast<std::uint8_t>(e);
            const auto &acc = accept_[code & 7];
            std::uint64_t carry_state = 1, carry_parity = 0;
            bool negative = (code & 1) != 0;
            for (std::size_t w = 0; w < words_; ++w) {
                std::uint64_t s = state_[w], p = parity_[w];
                state_[w] = ((s << 1) | carry_state) & acc[w];
                parity_[w] = ((p << 1) | carry_parity) ^ (negative ? toggle_[w] : 0);
                carry_state = s >> 63;
                carry_parity = p >> 63;
            }
            if (state_[top_word_] & top_bit_) {
                if (on_match((parity_[top_word_] & top_bit_) != 0)) {
                    std::fill(state_.begin(), state_.end(), 0);
                }
            }
            ++position_;
        }
    }

    /// Returns true when the live candidates must be dropped (greedy mode).
    bool on_match(bool odd_minus) {
        std::uint64_t start = position_ + 1 - template_.span();
        if (start < track_from_) {
            return false;
        }
        bool counted = start >= count_from_ && start < count_until_;
        if (counted) {
            ++estimate_.match_count;
            estimate_.signed_sum += odd_minus ? -template_.phase : template_.phase;
            if (has_last_ && start - last_start_ < template_.span()) {
                ++estimate_.overlapping_matches;
            }
        }
        has_last_ = true;
        last_start_ = start;
        return counted && mode_ == ScanMode::NonOverlapping;
    }

    Template template_;
    ScanMode mode_;
    std::uint64_t count_from_, count_until_, track_from_;
    std::uint64_t position_;
    std::size_t words_ = 1;
    std::size_t top_word_ = 0;
    std::uint64_t top_bit_ = 0;
    std::array<std::vector<std::uint64_t>, 8> accept_;
    std::vector<std::uint64_t> toggle_;
    std::vector<std::uint64_t> state_;
    std::vector<std::uint64_t> parity_;
    bool has_last_ = false;
    std::uint64_t last_start_ = 0;
    CorrelatorEstimate estimate_;
};

/// Streaming scanner over one record for a set of templates. Memory use is
/// independent of the record length.
class Scanner {
   public:
    Scanner(const std::vector<Template> &templates, ScanOptions options, std::uint64_t burn_in) {
        std::uint64_t from = options.skip_burn_in ? burn_in : 0;
        for (const auto &t : templates) {
            matchers_.emplace_back(t, options.mode, from, std::numeric_limits<std::uint64_t>::max(), from, 0);
        }
    }

    void feed(std::span<const Event> events) {
        for (auto &m : matchers_) {
            m.feed(events);
        }
    }

    std::vector<CorrelatorEstimate> estimates() const {
        std::vector<CorrelatorEstimate> out;
        for (const auto &m : matchers_) {
            out.push_back(m.estimate());
        }
        return out;
    }

   private:
    std::vector<TemplateMatcher> matchers_;
};

inline std::vector<CorrelatorEstimate> scan(std::span<const Event> events, std::uint64_t burn_in,
                                            const std::vector<Template> &templates, ScanOptions options = {}) {
    Scanner scanner(templates, options, burn_in);
    scanner.feed(events);
    return scanner.estimates();
}

inline std::vector<CorrelatorEstimate> scan(const ClickRecord &record, const std::vector<Template> &templates,
                                            ScanOptions options = {}) {
    return scan(record.events, record.burn_in, templates, options);
}

/// Splits the start offsets into chunks scanned independently (each chunk
/// reads span-1 events past its end, and span-1 before its start for overlap
/// bookkeeping) and sums the integer accumulators. Results are bit-identical
/// to scan() for any chunk size and thread count. Greedy non-overlapping
/// matching is inherently sequential, so that mode falls back to scan().
inline std::vector<CorrelatorEstimate> scan_chunked(std::span<const Event> events, std::uint64_t burn_in,
                                                    const std::vector<Template> &templates, ScanOptions options,
                                                    std::size_t chunk_size, std::size_t threads = 1) {
    if (options.mode == ScanMode::NonOverlapping) {
        return scan(events, burn_in, templates, options);
    }
    if (chunk_size == 0) {
        throw std::invalid_argument("chunk size must be positive");
    }
    const std::uint64_t n = events.size();
    const std::uint64_t min_start = options.skip_burn_in ? burn_in : 0;
    const std::size_t n_chunks = static_cast<std::size_t>((n + chunk_size - 1) / chunk_size);
    std::vector<std::vector<CorrelatorEstimate>> partial(n_chunks);

    auto run_chunk = [&](std::size_t c) {
        std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk_size;
        std::uint64_t hi = std::min<std::uint64_t>(n, lo + chunk_size);
        std::vector<CorrelatorEstimate> out;
        for (const auto &t : templates) {
            std::uint64_t reach = t.span() - 1;
            std::uint64_t track = std::max<std::uint64_t>(lo >= reach ? lo - reach : 0, min_start);
            std::uint64_t first = track;
            std::uint64_t last = std::min<std::uint64_t>(n, hi + reach);
            TemplateMatcher m(t, options.mode, std::max(lo, min_start), hi, track, first);
            if (first < last) {
                m.feed(events.subspan(first, last - first));
            }
            out.push_back(m.estimate());
        }
        partial[c] = std::move(out);
    };

    threads = std::max<std::size_t>(1, std::min(threads, n_chunks));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t c = t; c < n_chunks; c += threads) {
                run_chunk(c);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }

    std::vector<CorrelatorEstimate> total;
    for (const auto &t : templates) {
        CorrelatorEstimate e;
        e.template_id = t.id();
        e.family = t.family;
        e.l = t.l;
        total.push_back(e);
    }
    for (const auto &chunk : partial) {
        for (std::size_t i = 0; i < total.size(); ++i) {
            total[i] += chunk[i];
        }
    }
    return total;
}

/// Adds estimates of matching templates (e.g. from independent streams).
inline std::vector<CorrelatorEstimate> merge_estimates(const std::vector<std::vector<CorrelatorEstimate>> &parts) {
    std::vector<CorrelatorEstimate> out;
    for (const auto &part : parts) {
        for (const auto &e : part) {
            auto it = std::find_if(out.begin(), out.end(),
                                   [&](const CorrelatorEstimate &o) { return o.template_id == e.template_id; });
            if (it == out.end()) {
                out.push_back(e);
            } else {
                *it += e;
            }
        }
    }
    return out;
}

}  // namespace csmg

#endif  // CSMG_SCAN_HPP
