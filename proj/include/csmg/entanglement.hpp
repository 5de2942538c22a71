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

#ifndef CSMG_ENTANGLEMENT_HPP
#define CSMG_ENTANGLEMENT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmg/scan.hpp"

namespace csmg {

/// Two-photon correlators <Y(x)Z>, <Z(x)Y>, <X(x)X>.
struct TwoQubitMoments {
    double mu_yz = 0;
    double mu_zy = 0;
    double mu_xx = 0;

    void validate() const {
        for (double m : {mu_yz, mu_zy, mu_xx}) {
            if (!(std::abs(m) <= 1.0)) {
                throw std::invalid_argument("correlator moments must lie in [-1, 1]");
            }
        }
    }
};

inline constexpr double kPositivityTolerance = 1e-9;

struct RhoTildeSpectrum {
    // Ordered by (s1, s2) = (+,+), (+,-), (-,+), (-,-).
    std::array<double, 4> eigenvalues{};
    // Some eigenvalue was below -kPositivityTolerance.
    bool positivity_violated = false;
};

/// Spectrum of (I + mu_yz YZ + mu_zy ZY + mu_xx XX) / 4. YZ and ZY commute and
/// multiply to XX, so the eigenvalue on the joint eigenspace (s1, s2) is
/// (1 + s1 mu_yz + s2 mu_zy + s1 s2 mu_xx) / 4.
inline RhoTildeSpectrum rho_tilde_eigenvalues(const TwoQubitMoments &m) {
    m.validate();
    RhoTildeSpectrum out;
    std::size_t k = 0;
    for (int s1 : {1, -1}) {
        for (int s2 : {1, -1}) {
            double v = (1.0 + s1 * m.mu_yz + s2 * m.mu_zy + s1 * s2 * m.mu_xx) / 4.0;
            out.eigenvalues[k++] = v;
            if (v < -kPositivityTolerance) {
                out.positivity_violated = true;
            }
        }
    }
    return out;
}

/// Eigenvalues clamped at zero and renormalized, so statistical estimates
/// that fall slightly outside the physical set still give a state.
inline std::array<double, 4> physical_eigenvalues(const RhoTildeSpectrum &spectrum) {
    std::array<double, 4> v = spectrum.eigenvalues;
    double total = 0;
    for (double &x : v) {
        x = std::max(0.0, x);
        total += x;
    }
    for (double &x : v) {
        x /= total;
    }
    return v;
}

/// Concurrence of the Bell-diagonal state: max(0, 2 lambda_max - 1).
inline double concurrence(const TwoQubitMoments &m) {
    auto v = physical_eigenvalues(rho_tilde_eigenvalues(m));
    double top = *std::max_element(v.begin(), v.end());
    return std::clamp(2.0 * top - 1.0, 0.0, 1.0);
}

inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double eof_from_concurrence(double c) {
    c = std::clamp(c, 0.0, 1.0);
    return binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
}

/// Entanglement of formation in ebits.
inline double eof(const TwoQubitMoments &m) {
    return eof_from_concurrence(concurrence(m));
}

enum class BoundMethod : std::uint8_t { Direct, Indirect };

inline std::string bound_method_name(BoundMethod m) {
    return m == BoundMethod::Direct ? "direct" : "indirect";
}

/// Lower bound on the localizable entanglement between photons l apart.
struct LEBoundRow {
    std::int64_t l = 0;
    BoundMethod method = BoundMethod::Direct;
    TwoQubitMoments moments;
    double eof = 0;
    // Moments shrunk toward zero by 1.96 standard errors.
    double eof_conservative = 0;
    bool clamped = false;
    double se_gamma1 = 0;
    double se_gamma2 = 0;
};

struct LEBoundTable {
    std::vector<LEBoundRow> rows;

    /// Largest l whose conservative bound is positive; 0 if none.
    std::int64_t xi_e() const {
        std::int64_t best = 0;
        for (const auto &r : rows) {
            if (r.eof_conservative > 0) {
                best = std::max(best, r.l);
            }
        }
        return best;
    }
};

inline constexpr double kConservativeSigmas = 1.96;

/// |mu| reduced by `haircut` (not past zero), clamped to [-1, 1].
inline double shrink_toward_zero(double mu, double haircut) {
    double magnitude = std::clamp(std::abs(mu) - haircut, 0.0, 1.0);
    return mu < 0 ? -magnitude : magnitude;
}

/// Direct bound from measured Gamma1/Gamma2 correlators: mu_yz = mu_zy =
/// <Gamma1(l)>, mu_xx = <Gamma2(l)>. With `ls` empty every l that has
/// matches for both families is used; otherwise each requested l must be
/// present.
inline LEBoundTable direct_bounds(const std::vector<CorrelatorEstimate> &estimates,
                                  const std::vector<std::int64_t> &ls = {}) {
    std::map<std::int64_t, std::array<std::optional<CorrelatorEstimate>, 2>> by_l;
    for (const auto &e : estimates) {
        if (e.match_count == 0) {
            continue;
        }
        auto &slot = by_l[e.l][e.family == Family::Gamma1 ? 0 : 1];
        if (slot) {
            *slot += e;
        } else {
            slot = e;
        }
    }
    std::vector<std::int64_t> wanted = ls;
    if (wanted.empty()) {
        for (const auto &[l, pair] : by_l) {
            if (pair[0] && pair[1]) {
                wanted.push_back(l);
            }
        }
    }
    LEBoundTable table;
    for (std::int64_t l : wanted) {
        auto it = by_l.find(l);
        if (it == by_l.end() || !it->second[0] || !it->second[1]) {
            throw std::invalid_argument("missing gamma1/gamma2 estimates with matches at l=" + std::to_string(l));
        }
        const auto &g1 = *it->second[0];
        const auto &g2 = *it->second[1];
        LEBoundRow row;
        row.l = l;
        row.method = BoundMethod::Direct;
        row.moments = {g1.mean(), g1.mean(), g2.mean()};
        row.se_gamma1 = g1.std_error();
        row.se_gamma2 = g2.std_error();
        row.clamped = rho_tilde_eigenvalues(row.moments).positivity_violated;
        row.eof = eof(row.moments);
        double c1 = shrink_toward_zero(g1.mean(), kConservativeSigmas * row.se_gamma1);
        double c2 = shrink_toward_zero(g2.mean(), kConservativeSigmas * row.se_gamma2);
        row.eof_conservative = eof({c1, c1, c2});
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace csmg

#endif  // CSMG_ENTANGLEMENT_HPP
