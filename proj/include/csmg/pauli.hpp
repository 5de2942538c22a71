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

#ifndef CSMG_PAULI_HPP
#define CSMG_PAULI_HPP

#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace csmg {

/// Single-qubit Pauli operator. The numeric encoding packs (x, z) bits as
/// value = x | (z << 1), so I=0, X=1, Z=2, Y=3.
enum class PauliLetter : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline constexpr bool x_bit(PauliLetter p) {
    return (static_cast<std::uint8_t>(p) & 1) != 0;
}
inline constexpr bool z_bit(PauliLetter p) {
    return (static_cast<std::uint8_t>(p) & 2) != 0;
}
inline constexpr PauliLetter letter_from_bits(bool x, bool z) {
    return static_cast<PauliLetter>(static_cast<std::uint8_t>(x) | (static_cast<std::uint8_t>(z) << 1));
}

inline constexpr char letter_char(PauliLetter p) {
    switch (p) {
        case PauliLetter::X:
            return 'X';
        case PauliLetter::Y:
            return 'Y';
        case PauliLetter::Z:
            return 'Z';
        default:
            return 'I';
    }
}

inline PauliLetter letter_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return PauliLetter::I;
        case 'X':
            return PauliLetter::X;
        case 'Y':
            return PauliLetter::Y;
        case 'Z':
            return PauliLetter::Z;
        default:
            throw std::invalid_argument(std::string("not a Pauli letter: '") + c + "'");
    }
}

inline constexpr bool letters_commute(PauliLetter a, PauliLetter b) {
    return a == PauliLetter::I || b == PauliLetter::I || a == b;
}

/// Global phase restricted to {+1, +i, -1, -i}, stored as the power of i.
class Phase {
   public:
    constexpr Phase() = default;
    static constexpr Phase from_power(int power) {
        Phase p;
        p.power_ = static_cast<std::uint8_t>(((power % 4) + 4) % 4);
        return p;
    }
    static constexpr Phase plus_one() {
        return from_power(0);
    }
    static constexpr Phase plus_i() {
        return from_power(1);
    }
    static constexpr Phase minus_one() {
        return from_power(2);
    }
    static constexpr Phase minus_i() {
        return from_power(3);
    }

    constexpr int power() const {
        return power_;
    }
    constexpr bool is_real() const {
        return (power_ & 1) == 0;
    }
    /// +1 or -1. Only valid for real phases.
    constexpr int sign() const {
        return power_ == 0 ? 1 : -1;
    }

    constexpr Phase operator*(Phase other) const {
        return from_power(power_ + other.power_);
    }
    constexpr bool operator==(const Phase &) const = default;

    std::string str() const {
        static constexpr const char *kNames[4] = {"+", "+i", "-", "-i"};
        return kNames[power_];
    }

   private:
    std::uint8_t power_ = 0;
};

/// Power of i produced by the single-qubit product a*b (XY = iZ, YZ = iX, ZX = iY).
inline constexpr int letter_product_power(PauliLetter a, PauliLetter b) {
    if (a == PauliLetter::I || b == PauliLetter::I || a == b) {
        return 0;
    }
    bool cyclic = (a == PauliLetter::X && b == PauliLetter::Y) || (a == PauliLetter::Y && b == PauliLetter::Z) ||
                  (a == PauliLetter::Z && b == PauliLetter::X);
    return cyclic ? 1 : 3;
}

inline constexpr PauliLetter letter_product(PauliLetter a, PauliLetter b) {
    return static_cast<PauliLetter>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

/// Sparse Pauli string over integer-labelled qubits with an exact phase.
/// Identity positions are never stored.
class PauliString {
   public:
    using Letters = std::map<std::int64_t, PauliLetter>;

    PauliString() = default;
    PauliString(Phase phase, std::initializer_list<std::pair<const std::int64_t, PauliLetter>> letters)
        : phase_(phase) {
        for (const auto &[q, p] : letters) {
            set(q, p);
        }
    }

    /// Parses a dense string such as "+ZYYZ", "-X_Z" or "iXY", assigning the
    /// first letter to qubit `first_index`.
    static PauliString from_dense(std::string_view text, std::int64_t first_index = 0) {
        PauliString result;
        int power = 0;
        std::size_t k = 0;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) {
            power += text[k] == '-' ? 2 : 0;
            ++k;
        }
        if (k < text.size() && text[k] == 'i') {
            power += 1;
            ++k;
        }
        result.phase_ = Phase::from_power(power);
        for (std::int64_t q = first_index; k < text.size(); ++k, ++q) {
            result.set(q, letter_from_char(text[k]));
        }
        return result;
    }

    static PauliString single(std::int64_t qubit, PauliLetter letter) {
        PauliString result;
        result.set(qubit, letter);
        return result;
    }

    Phase phase() const {
        return phase_;
    }
    void set_phase(Phase phase) {
        phase_ = phase;
    }
    const Letters &letters() const {
        return letters_;
    }

    PauliLetter at(std::int64_t qubit) const {
        auto it = letters_.find(qubit);
        return it == letters_.end() ? PauliLetter::I : it->second;
    }

    void set(std::int64_t qubit, PauliLetter letter) {
        if (letter == PauliLetter::I) {
            letters_.erase(qubit);
        } else {
            letters_[qubit] = letter;
        }
    }

    std::size_t weight() const {
        return letters_.size();
    }
    bool is_identity() const {
        return letters_.empty();
    }
    bool is_hermitian() const {
        return phase_.is_real();
    }

    bool commutes_with(const PauliString &other) const {
        int anticommuting = 0;
        for (const auto &[q, p] : letters_) {
            if (!letters_commute(p, other.at(q))) {
                ++anticommuting;
            }
        }
        return anticommuting % 2 == 0;
    }

    bool operator==(const PauliString &) const = default;

    /// e.g. "+Z0 Y1 Y2 Z3"; the identity prints as "+I".
    std::string str() const {
        std::string out = phase_.str();
        if (letters_.empty()) {
            return out + "I";
        }
        bool first = true;
        for (const auto &[q, p] : letters_) {
            if (!first) {
                out += ' ';
            }
            first = false;
            out += letter_char(p);
            out += std::to_string(q);
        }
        return out;
    }

   private:
    Phase phase_;
    Letters letters_;
};

/// Exact product a*b.
inline PauliString multiply(const PauliString &a, const PauliString &b) {
    PauliString result = a;
    int power = a.phase().power() + b.phase().power();
    for (const auto &[q, pb] : b.letters()) {
        PauliLetter pa = a.at(q);
        power += letter_product_power(pa, pb);
        result.set(q, letter_product(pa, pb));
    }
    result.set_phase(Phase::from_power(power));
    return result;
}

inline PauliString operator*(const PauliString &a, const PauliString &b) {
    return multiply(a, b);
}

/// The cluster-state stabilizer K_i = Z_{i-1} X_i Z_{i+1}.
inline PauliString cluster_stabilizer(std::int64_t i) {
    return PauliString(Phase::plus_one(), {{i - 1, PauliLetter::Z}, {i, PauliLetter::X}, {i + 1, PauliLetter::Z}});
}

}  // namespace csmg

#endif  // CSMG_PAULI_HPP
