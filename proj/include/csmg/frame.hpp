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

#ifndef CSMG_FRAME_HPP
#define CSMG_FRAME_HPP

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csmg/pauli.hpp"
#include "csmg/rng.hpp"

namespace csmg {

enum class MeasBasis : std::uint8_t { X = 1, Y = 2, Z = 3 };

enum class Outcome : std::int8_t { Plus = 1, Minus = -1 };

inline constexpr int value(Outcome o) {
    return static_cast<int>(o);
}

inline constexpr PauliLetter basis_letter(MeasBasis b) {
    switch (b) {
        case MeasBasis::X:
            return PauliLetter::X;
        case MeasBasis::Y:
            return PauliLetter::Y;
        default:
            return PauliLetter::Z;
    }
}

inline constexpr char basis_char(MeasBasis b) {
    return letter_char(basis_letter(b));
}

namespace detail {

/// Hermitian Pauli string over frame slots: letter at slot s is (x_s, z_s)
/// with (1,1) meaning Y itself, times (-1)^negative.
struct PackedPauli {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    bool negative = false;

    bool operator==(const PackedPauli &) const = default;
};

inline bool anticommutes(const PackedPauli &a, const PackedPauli &b) {
    return (std::popcount((a.x & b.z) ^ (a.z & b.x)) & 1) != 0;
}

/// Power of i accumulated by multiplying the letters of a by those of b.
inline int letter_power(std::uint64_t ax, std::uint64_t az, std::uint64_t bx, std::uint64_t bz) {
    std::uint64_t a_x = ax & ~az, a_y = ax & az, a_z = ~ax & az;
    std::uint64_t b_x = bx & ~bz, b_y = bx & bz, b_z = ~bx & bz;
    std::uint64_t cyclic = (a_x & b_y) | (a_y & b_z) | (a_z & b_x);
    std::uint64_t anti = (a_y & b_x) | (a_z & b_y) | (a_x & b_z);
    return std::popcount(cyclic) - std::popcount(anti);
}

/// target <- target * other. Both must commute so the product stays Hermitian.
inline void multiply_into(PackedPauli &target, const PackedPauli &other) {
    int power = letter_power(target.x, target.z, other.x, other.z) + 2 * (target.negative + other.negative);
    power = ((power % 4) + 4) % 4;
    assert(power % 2 == 0);
    target.x ^= other.x;
    target.z ^= other.z;
    target.negative = power == 2;
}

/// Removes bit `slot` from a mask, shifting higher bits down by one.
inline std::uint64_t drop_bit(std::uint64_t mask, unsigned slot) {
    std::uint64_t low = (std::uint64_t{1} << slot) - 1;
    return (mask & low) | ((mask >> 1) & ~low);
}

}  // namespace detail

/// Stabilizer description of a bounded window of qubits.
///
/// Qubits carry arbitrary increasing integer labels. The frame stores only
/// stabilizer generators (no destabilizers), which is enough for Pauli
/// conjugation, Pauli measurement and partial trace, and lets it represent
/// mixed states by holding fewer generators than qubits.
class StabilizerFrame {
   public:
    static constexpr std::size_t kMaxQubits = 64;

    std::span<const std::int64_t> active() const {
        return active_;
    }
    std::size_t num_qubits() const {
        return active_.size();
    }
    std::size_t num_generators() const {
        return gens_.size();
    }
    bool is_pure() const {
        return gens_.size() == active_.size();
    }
    bool is_active(std::int64_t qubit) const {
        return find_slot(qubit).has_value();
    }

    std::vector<PauliString> generators() const {
        std::vector<PauliString> out;
        out.reserve(gens_.size());
        for (const auto &g : gens_) {
            out.push_back(expand(g));
        }
        return out;
    }

    /// Adds an unentangled qubit stabilized by +letter (X gives |+>).
    void add_qubit(std::int64_t index, PauliLetter stabilized_by = PauliLetter::X) {
        if (stabilized_by == PauliLetter::I) {
            throw std::invalid_argument("a fresh qubit must be stabilized by X, Y or Z");
        }
        unsigned slot = push_slot(index);
        detail::PackedPauli g;
        g.x = x_bit(stabilized_by) ? std::uint64_t{1} << slot : 0;
        g.z = z_bit(stabilized_by) ? std::uint64_t{1} << slot : 0;
        gens_.push_back(g);
    }

    /// Extends the linear cluster by one qubit: a |+> qubit joined to the
    /// current last qubit by a controlled-phase.
    void emit_cluster_qubit(std::int64_t index) {
        bool has_left = !active_.empty();
        unsigned slot = push_slot(index);
        detail::PackedPauli g;
        g.x = std::uint64_t{1} << slot;
        if (has_left) {
            std::uint64_t left = std::uint64_t{1} << (slot - 1);
            std::uint64_t self = std::uint64_t{1} << slot;
            // CZ: X_left -> X_left Z_self. Existing generators are identity on
            // the new slot so no sign changes arise.
            for (auto &h : gens_) {
                if (h.x & left) {
                    h.z |= self;
                }
            }
            g.z = left;
        }
        gens_.push_back(g);
        debug_check();
    }

    /// Conjugates the state by p (its phase is irrelevant).
    void apply_pauli(const PauliString &p) {
        detail::PackedPauli packed = pack(p);
        for (auto &g : gens_) {
            if (detail::anticommutes(g, packed)) {
                g.negative = !g.negative;
            }
        }
    }

    void apply_letter(std::int64_t qubit, PauliLetter letter) {
        unsigned slot = require_slot(qubit);
        std::uint64_t bit = std::uint64_t{1} << slot;
        detail::PackedPauli packed{x_bit(letter) ? bit : 0, z_bit(letter) ? bit : 0, false};
        for (auto &g : gens_) {
            if (detail::anticommutes(g, packed)) {
                g.negative = !g.negative;
            }
        }
    }

    void apply_zz(std::int64_t a, std::int64_t b) {
        std::uint64_t mask = (std::uint64_t{1} << require_slot(a)) ^ (std::uint64_t{1} << require_slot(b));
        for (auto &g : gens_) {
            if (std::popcount(g.x & mask) & 1) {
                g.negative = !g.negative;
            }
        }
    }

    /// Projective measurement of one qubit. The qubit stays active.
    Outcome measure(std::int64_t qubit, MeasBasis basis, Rng &rng) {
        unsigned slot = require_slot(qubit);
        std::uint64_t bit = std::uint64_t{1} << slot;
        PauliLetter letter = basis_letter(basis);
        detail::PackedPauli observable{x_bit(letter) ? bit : 0, z_bit(letter) ? bit : 0, false};
        return measure_packed(observable, rng);
    }

    /// Exact expectation value of a Hermitian Pauli observable: +1 or -1 when
    /// it (or its negation) is in the stabilizer group, 0 otherwise.
    int expectation(const PauliString &observable) const {
        if (!observable.is_hermitian()) {
            throw std::invalid_argument("observable must have a real phase: " + observable.str());
        }
        detail::PackedPauli packed = pack(observable);
        for (const auto &g : gens_) {
            if (detail::anticommutes(g, packed)) {
                return 0;
            }
        }
        auto sign = sign_in_group(packed);
        if (!sign) {
            return 0;
        }
        return *sign ? -1 : 1;
    }

    /// Exact partial trace over `qubit`. Keeps the subgroup acting as identity
    /// on it; the result may be mixed.
    void trace_out(std::int64_t qubit) {
        unsigned slot = require_slot(qubit);
        std::uint64_t bit = std::uint64_t{1} << slot;
        int with_x = -1;
        for (int i = 0; i < static_cast<int>(gens_.size()); ++i) {
            if (gens_[i].x & bit) {
                if (with_x < 0) {
                    with_x = i;
                } else {
                    detail::multiply_into(gens_[i], gens_[with_x]);
                }
            }
        }
        int with_z = -1;
        for (int i = 0; i < static_cast<int>(gens_.size()); ++i) {
            if (i != with_x && (gens_[i].z & bit)) {
                if (with_z < 0) {
                    with_z = i;
                } else {
                    detail::multiply_into(gens_[i], gens_[with_z]);
                }
            }
        }
        int hi = std::max(with_x, with_z), lo = std::min(with_x, with_z);
        if (hi >= 0) {
            gens_.erase(gens_.begin() + hi);
        }
        if (lo >= 0) {
            gens_.erase(gens_.begin() + lo);
        }
        for (auto &g : gens_) {
            g.x = detail::drop_bit(g.x, slot);
            g.z = detail::drop_bit(g.z, slot);
        }
        active_.erase(active_.begin() + slot);
        debug_check();
    }

    /// Measures `qubit` in `basis`, forgets the outcome and removes it. The
    /// remaining qubits are left in a state sampled from the partial trace,
    /// and a pure frame stays pure.
    void discard(std::int64_t qubit, Rng &rng, MeasBasis basis = MeasBasis::Z) {
        measure(qubit, basis, rng);
        trace_out(qubit);
    }

    /// Full structural check: commuting, independent, no -I, count <= qubits.
    bool check_invariants() const {
        if (gens_.size() > active_.size()) {
            return false;
        }
        std::uint64_t valid = active_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << active_.size()) - 1;
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if ((gens_[i].x | gens_[i].z) & ~valid) {
                return false;
            }
            for (std::size_t j = i + 1; j < gens_.size(); ++j) {
                if (detail::anticommutes(gens_[i], gens_[j])) {
                    return false;
                }
            }
        }
        // Independence also rules out -I, which would reduce to zero.
        return rank(gens_) == gens_.size();
    }

   private:
    struct Row {
        std::uint64_t x, z, combo;
    };

    std::optional<unsigned> find_slot(std::int64_t qubit) const {
        for (std::size_t s = 0; s < active_.size(); ++s) {
            if (active_[s] == qubit) {
                return static_cast<unsigned>(s);
            }
        }
        return std::nullopt;
    }

    unsigned require_slot(std::int64_t qubit) const {
        auto s = find_slot(qubit);
        if (!s) {
            throw std::invalid_argument("qubit " + std::to_string(qubit) + " is not active in the frame");
        }
        return *s;
    }

    unsigned push_slot(std::int64_t index) {
        if (!active_.empty() && index != active_.back() + 1) {
            throw std::invalid_argument("qubit index " + std::to_string(index) + " does not follow the last active qubit " +
                                        std::to_string(active_.back()));
        }
        if (active_.size() >= kMaxQubits) {
            throw std::length_error("stabilizer frame is limited to 64 active qubits");
        }
        active_.push_back(index);
        return static_cast<unsigned>(active_.size() - 1);
    }

    detail::PackedPauli pack(const PauliString &p) const {
        detail::PackedPauli out;
        for (const auto &[q, letter] : p.letters()) {
            auto slot = find_slot(q);
            if (!slot) {
                throw std::invalid_argument("Pauli string " + p.str() + " acts on inactive qubit " + std::to_string(q));
            }
            std::uint64_t bit = std::uint64_t{1} << *slot;
            out.x |= x_bit(letter) ? bit : 0;
            out.z |= z_bit(letter) ? bit : 0;
        }
        out.negative = p.phase() == Phase::minus_one();
        return out;
    }

    PauliString expand(const detail::PackedPauli &g) const {
        PauliString out;
        for (std::size_t s = 0; s < active_.size(); ++s) {
            out.set(active_[s], letter_from_bits((g.x >> s) & 1, (g.z >> s) & 1));
        }
        out.set_phase(g.negative ? Phase::minus_one() : Phase::plus_one());
        return out;
    }

    /// Gaussian elimination over GF(2) into reduced row echelon form.
    /// Returns the number of pivot rows (the leading rows of `rows`).
    static std::size_t reduce(std::vector<Row> &rows) {
        std::size_t rank = 0;
        for (unsigned col = 0; col < 128 && rank < rows.size(); ++col) {
            auto has = [col](const Row &r) {
                return col < 64 ? ((r.x >> col) & 1) != 0 : ((r.z >> (col - 64)) & 1) != 0;
            };
            std::size_t pivot = rank;
            while (pivot < rows.size() && !has(rows[pivot])) {
                ++pivot;
            }
            if (pivot == rows.size()) {
                continue;
            }
            std::swap(rows[pivot], rows[rank]);
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (j != rank && has(rows[j])) {
                    rows[j].x ^= rows[rank].x;
                    rows[j].z ^= rows[rank].z;
                    rows[j].combo ^= rows[rank].combo;
                }
            }
            ++rank;
        }
        return rank;
    }

    static std::size_t rank(const std::vector<detail::PackedPauli> &gens) {
        std::vector<Row> rows;
        for (const auto &g : gens) {
            rows.push_back({g.x, g.z, 0});
        }
        return reduce(rows);
    }

    /// If +-p lies in the stabilizer group, returns whether it is -p.
    std::optional<bool> sign_in_group(const detail::PackedPauli &p) const {
        std::vector<Row> rows;
        rows.reserve(gens_.size());
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            rows.push_back({gens_[i].x, gens_[i].z, std::uint64_t{1} << i});
        }
        std::size_t r = reduce(rows);
        std::uint64_t tx = p.x, tz = p.z, combo = 0;
        for (std::size_t k = 0; k < r; ++k) {
            // The lowest set bit of a reduced row is its pivot.
            bool hit = rows[k].x != 0 ? ((tx >> std::countr_zero(rows[k].x)) & 1) != 0
                                      : ((tz >> std::countr_zero(rows[k].z)) & 1) != 0;
            if (hit) {
                tx ^= rows[k].x;
                tz ^= rows[k].z;
                combo ^= rows[k].combo;
            }
        }
        if (tx != 0 || tz != 0) {
            return std::nullopt;
        }
        detail::PackedPauli acc;
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if ((combo >> i) & 1) {
                detail::multiply_into(acc, gens_[i]);
            }
        }
        return acc.negative != p.negative;
    }

    Outcome measure_packed(const detail::PackedPauli &observable, Rng &rng) {
        int pivot = -1;
        for (int i = 0; i < static_cast<int>(gens_.size()); ++i) {
            if (detail::anticommutes(gens_[i], observable)) {
                if (pivot < 0) {
                    pivot = i;
                } else {
                    detail::multiply_into(gens_[i], gens_[pivot]);
                }
            }
        }
        if (pivot >= 0) {
            bool minus = rng.coin();
            gens_[pivot] = observable;
            gens_[pivot].negative = minus;
            debug_check();
            return minus ? Outcome::Minus : Outcome::Plus;
        }
        if (auto sign = sign_in_group(observable)) {
            return *sign ? Outcome::Minus : Outcome::Plus;
        }
        // Mixed state and the observable is not in the group: uniform outcome.
        bool minus = rng.coin();
        gens_.push_back(observable);
        gens_.back().negative = minus;
        debug_check();
        return minus ? Outcome::Minus : Outcome::Plus;
    }

    void debug_check() const {
        assert(check_invariants());
    }

    std::vector<std::int64_t> active_;
    std::vector<detail::PackedPauli> gens_;
};

}  // namespace csmg

#endif  // CSMG_FRAME_HPP
