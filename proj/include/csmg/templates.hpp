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

#ifndef CSMG_TEMPLATES_HPP
#define CSMG_TEMPLATES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csmg/errors.hpp"
#include "csmg/pauli.hpp"
#include "csmg/stream_sim.hpp"

namespace csmg {

enum class Family : std::uint8_t { Gamma1 = 1, Gamma2 = 2 };

inline std::string family_name(Family f) {
    return f == Family::Gamma1 ? "gamma1" : "gamma2";
}

inline Family parse_family(const std::string &name) {
    if (name == "gamma1" || name == "Gamma1" || name == "g1") {
        return Family::Gamma1;
    }
    if (name == "gamma2" || name == "Gamma2" || name == "g2") {
        return Family::Gamma2;
    }
    throw std::invalid_argument("unknown template family '" + name + "'");
}

enum class Slot : std::uint8_t { Free = 0, RequireX = 1, RequireY = 2, RequireZ = 3 };

inline constexpr PauliLetter slot_letter(Slot s) {
    switch (s) {
        case Slot::RequireX:
            return PauliLetter::X;
        case Slot::RequireY:
            return PauliLetter::Y;
        case Slot::RequireZ:
            return PauliLetter::Z;
        default:
            return PauliLetter::I;
    }
}

/// Separations for which the stabilizer-product templates exist.
inline constexpr bool is_valid_separation(std::int64_t l) {
    return l >= 2 && l % 3 == 2;
}

/// Measured-photon count n_m, identical for both families.
inline constexpr std::int64_t measured_count(std::int64_t l) {
    return (2 * l + 8) / 3;
}

/// Preferred-basis (Y) count n_p.
inline constexpr std::int64_t preferred_count(Family f, std::int64_t l) {
    return f == Family::Gamma1 ? (2 * l + 2) / 3 : (2 * l - 4) / 3;
}

/// A passive measurement pattern whose outcome product estimates a
/// two-photon correlator at separation l.
struct Template {
    Family family = Family::Gamma1;
    std::int64_t l = 2;
    std::vector<Slot> slots;
    int phase = 1;
    std::pair<std::int64_t, std::int64_t> pair_positions{0, 0};
    std::int64_t n_m = 0;
    std::int64_t n_p = 0;

    std::size_t span() const {
        return slots.size();
    }
    std::string id() const {
        return family_name(family) + "_l" + std::to_string(l);
    }
    /// e.g. "ZYY_YY_YYZ" with '_' for free slots.
    std::string pattern() const {
        std::string out;
        for (Slot s : slots) {
            out += s == Slot::Free ? '_' : letter_char(slot_letter(s));
        }
        return out;
    }
    PauliString as_pauli(std::int64_t offset = 0) const {
        PauliString out;
        for (std::size_t p = 0; p < slots.size(); ++p) {
            out.set(offset + static_cast<std::int64_t>(p), slot_letter(slots[p]));
        }
        out.set_phase(phase < 0 ? Phase::minus_one() : Phase::plus_one());
        return out;
    }
};

namespace detail {
inline void require_separation(std::int64_t l) {
    if (!is_valid_separation(l)) {
        throw std::invalid_argument("template separation must satisfy l >= 2 and l = 2 (mod 3), got " +
                                    std::to_string(l));
    }
}
}  // namespace detail

/// Z at both ends, Y pairs in between separated by free slots.
/// Pair (0, l) carries Z(x)Y; shifted by one it carries Y(x)Z.
inline Template make_gamma1(std::int64_t l) {
    detail::require_separation(l);
    Template t;
    t.family = Family::Gamma1;
    t.l = l;
    t.slots.assign(static_cast<std::size_t>(l + 2), Slot::Free);
    t.slots[0] = Slot::RequireZ;
    for (std::int64_t p = 1; p <= l; ++p) {
        t.slots[p] = p % 3 != 0 ? Slot::RequireY : Slot::Free;
    }
    t.slots[l + 1] = Slot::RequireZ;
    t.pair_positions = {0, l};
    t.n_m = measured_count(l);
    t.n_p = preferred_count(Family::Gamma1, l);
    return t;
}

/// Z X (free Y Y)* free X Z; the pair (1, l+1) carries X(x)X.
inline Template make_gamma2(std::int64_t l) {
    detail::require_separation(l);
    Template t;
    t.family = Family::Gamma2;
    t.l = l;
    t.slots.assign(static_cast<std::size_t>(l + 3), Slot::Free);
    t.slots[0] = Slot::RequireZ;
    t.slots[1] = Slot::RequireX;
    for (std::int64_t p = 2; p <= l; ++p) {
        t.slots[p] = p % 3 == 2 ? Slot::Free : Slot::RequireY;
    }
    t.slots[l + 1] = Slot::RequireX;
    t.slots[l + 2] = Slot::RequireZ;
    t.pair_positions = {1, l + 1};
    t.n_m = measured_count(l);
    t.n_p = preferred_count(Family::Gamma2, l);
    return t;
}

inline Template make_template(Family f, std::int64_t l) {
    return f == Family::Gamma1 ? make_gamma1(l) : make_gamma2(l);
}

/// Every template of the given families with l <= l_max, ordered by family then l.
inline std::vector<Template> template_grid(const std::vector<Family> &families, std::int64_t l_max) {
    std::vector<Template> out;
    for (Family f : families) {
        for (std::int64_t l = 2; l <= l_max; l += 3) {
            out.push_back(make_template(f, l));
        }
    }
    return out;
}

/// Positions (relative to the template start) of the cluster stabilizers
/// K_i whose product the template measures: K1 K2 K4 K5 ... for Gamma1 and
/// K1 K3 K4 K6 K7 ... K_{l+1} for Gamma2. Derived from the family rule, not
/// from the slots, so it can check them.
inline std::vector<std::int64_t> stabilizer_factors(Family f, std::int64_t l) {
    detail::require_separation(l);
    std::vector<std::int64_t> out;
    if (f == Family::Gamma1) {
        for (std::int64_t p = 1; p <= l; ++p) {
            if (p % 3 != 0) {
                out.push_back(p);
            }
        }
    } else {
        out.push_back(1);
        for (std::int64_t p = 3; p <= l - 1; ++p) {
            if (p % 3 != 2) {
                out.push_back(p);
            }
        }
        out.push_back(l + 1);
    }
    return out;
}

/// Number of adjacent pairs (p, p+1) on which a Z(x)Z error flips the
/// template's outcome product, i.e. pairs with an odd number of X/Y slots.
inline std::int64_t zz_flip_count(const Template &t) {
    auto anti = [&](std::int64_t p) {
        if (p < 0 || p >= static_cast<std::int64_t>(t.span())) {
            return 0;
        }
        Slot s = t.slots[p];
        return s == Slot::RequireX || s == Slot::RequireY ? 1 : 0;
    };
    std::int64_t count = 0;
    for (std::int64_t p = -1; p < static_cast<std::int64_t>(t.span()); ++p) {
        count += (anti(p) + anti(p + 1)) % 2;
    }
    return count;
}

/// Number of photons on which a uniformly random single Pauli flips the
/// product with probability 2/3 (every Require slot).
inline std::int64_t pauli_flip_count(const Template &t) {
    std::int64_t count = 0;
    for (Slot s : t.slots) {
        count += s != Slot::Free ? 1 : 0;
    }
    return count;
}

struct VerificationReport {
    std::string template_id;
    bool algebraic_ok = false;
    bool dynamic_ok = false;
    Phase phase;
    std::string message;

    bool ok() const {
        return algebraic_ok && dynamic_ok;
    }
};

/// Outcome-product of one template instance starting at `offset`, or 0 if
/// the events there do not match the template.
inline int instance_product(const Template &t, std::span<const Event> events, std::size_t offset) {
    if (offset + t.span() > events.size()) {
        return 0;
    }
    int product = t.phase;
    for (std::size_t p = 0; p < t.span(); ++p) {
        Slot s = t.slots[p];
        if (s == Slot::Free) {
            continue;
        }
        Event e = events[offset + p];
        if (is_lost(e) || basis_letter(basis_of(e)) != slot_letter(s)) {
            return 0;
        }
        product *= value(outcome_of(e));
    }
    return product;
}

/// Checks a template two ways: (a) the product of its stabilizer factors
/// equals the slot pattern with phase +1; (b) noiseless pipeline runs with the
/// template's bases forced (free slots and padding lost or read out at random)
/// always give outcome product +1.
inline VerificationReport verify_template(const Template &t, int trials = 64, std::uint64_t seed = 0x5eed) {
    VerificationReport report;
    report.template_id = t.id();

    PauliString product;
    for (std::int64_t k : stabilizer_factors(t.family, t.l)) {
        product = product * cluster_stabilizer(k);
    }
    report.phase = product.phase();
    PauliString expected = t.as_pauli();
    expected.set_phase(Phase::plus_one());
    PauliString letters_only = product;
    letters_only.set_phase(Phase::plus_one());
    if (letters_only != expected) {
        report.message = "stabilizer product " + product.str() + " does not match pattern " + t.pattern();
    } else if (product.phase() != Phase::plus_one() || t.phase != 1) {
        report.message = "stabilizer product has phase " + product.phase().str();
    } else {
        report.algebraic_ok = true;
    }

    constexpr std::size_t kPad = 3;
    const std::size_t length = kPad + t.span() + kPad;
    Rng schedule_rng(seed, 0xfeed);
    static constexpr Readout kAny[4] = {Readout::Lost, Readout::X, Readout::Y, Readout::Z};
    int failures = 0;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<Readout> schedule(length);
        for (std::size_t i = 0; i < length; ++i) {
            std::int64_t p = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(kPad);
            Slot s = (p >= 0 && p < static_cast<std::int64_t>(t.span())) ? t.slots[p] : Slot::Free;
            schedule[i] = s == Slot::Free ? kAny[schedule_rng.bits() & 3] : static_cast<Readout>(s);
        }
        auto events = simulate_forced(schedule, 0.0, 0.0, seed, static_cast<std::uint64_t>(trial));
        if (instance_product(t, events, kPad) != 1) {
            ++failures;
        }
    }
    report.dynamic_ok = failures == 0;
    if (!report.dynamic_ok) {
        if (!report.message.empty()) {
            report.message += "; ";
        }
        report.message += std::to_string(failures) + "/" + std::to_string(trials) +
                           " noiseless instances gave outcome product != +1";
    }
    return report;
}

inline void require_verified(const Template &t) {
    auto report = verify_template(t);
    if (!report.ok()) {
        throw VerificationError("template " + t.id() + " failed verification: " + report.message);
    }
}

}  // namespace csmg

#endif  // CSMG_TEMPLATES_HPP
