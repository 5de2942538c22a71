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

#ifndef CSMG_PLANNER_HPP
#define CSMG_PLANNER_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "csmg/templates.hpp"

namespace csmg {

// Experiment planning: how many photons a measurement needs.

/// Default experiment: 10 s of data at one photon per nanosecond.
inline constexpr double kDefaultMeasurementTime = 10.0;
inline constexpr double kDefaultTauEm = 1e-9;

inline double photons_in(double measurement_time, double tau_em) {
    if (!(measurement_time > 0.0) || !(tau_em > 0.0)) {
        throw std::invalid_argument("measurement time and emission period must be positive");
    }
    return measurement_time / tau_em;
}

/// Largest K such that full tomography of K consecutive photons gets at
/// least one measurement per density-matrix element: 4^K / p_d^K <= N.
inline std::int64_t naive_tomography_K(double p_d, double n_photons) {
    if (!(p_d > 0.0 && p_d <= 1.0) || !(n_photons >= 1.0)) {
        throw std::invalid_argument("naive tomography needs 0 < p_d <= 1 and N >= 1");
    }
    const double log_cost = std::log(4.0 / p_d);
    auto fits = [&](std::int64_t k) {
        return static_cast<double>(k) * log_cost <= std::log(n_photons) * (1.0 + 1e-15);
    };
    auto k = static_cast<std::int64_t>(std::floor(std::log(n_photons) / log_cost));
    while (k > 0 && !fits(k)) {
        --k;
    }
    while (fits(k + 1)) {
        ++k;
    }
    return k;
}

/// Passive detector arrangements. Two detectors measure Y and Z only; three
/// measure X, Y and Z.
enum class Layout : std::uint8_t { TwoDetector, ThreeDetector };

inline std::string layout_name(Layout l) {
    return l == Layout::TwoDetector ? "two_detector" : "three_detector";
}

/// The layout each family needs with the fewest detectors.
inline Layout natural_layout(Family f) {
    return f == Family::Gamma1 ? Layout::TwoDetector : Layout::ThreeDetector;
}

/// Number of detectors outside the preferred (Y) direction.
inline int off_preferred_detectors(Layout l) {
    return l == Layout::TwoDetector ? 1 : 2;
}

namespace detail {
inline void require_probability(double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
}

inline void require_layout(Family f, Layout layout) {
    if (f == Family::Gamma2 && layout == Layout::TwoDetector) {
        throw std::invalid_argument("gamma2 needs X, Y and Z detectors; the two-detector layout cannot measure it");
    }
}
}  // namespace detail

/// Probability that a given offset holds an instance of `t`: the product over
/// its measured slots of p_d times the routing probability of the slot basis.
inline double instance_probability(const Template &t, double p_d, double q_x, double q_y, double q_z) {
    detail::require_probability(p_d, "p_d");
    detail::require_probability(q_x, "q_x");
    detail::require_probability(q_y, "q_y");
    detail::require_probability(q_z, "q_z");
    if (std::abs(q_x + q_y + q_z - 1.0) > 1e-12) {
        throw std::invalid_argument("q_x + q_y + q_z must equal 1");
    }
    double p = 1.0;
    for (Slot s : t.slots) {
        switch (s) {
            case Slot::RequireX:
                p *= p_d * q_x;
                break;
            case Slot::RequireY:
                p *= p_d * q_y;
                break;
            case Slot::RequireZ:
                p *= p_d * q_z;
                break;
            default:
                break;
        }
    }
    return p;
}

inline double instance_probability(Family f, std::int64_t l, double p_d, double q_x, double q_y, double q_z,
                                   Layout layout) {
    detail::require_layout(f, layout);
    if (layout == Layout::TwoDetector && q_x != 0.0) {
        throw std::invalid_argument("the two-detector layout has no X detector (q_x must be 0)");
    }
    return instance_probability(make_template(f, l), p_d, q_x, q_y, q_z);
}

/// Best fraction of photons to route to Y: n_p / n_m.
inline double optimal_pp(Family f, std::int64_t l) {
    detail::require_separation(l);
    return static_cast<double>(preferred_count(f, l)) / static_cast<double>(measured_count(l));
}

/// Splitter probabilities (q_x, q_y, q_z) at the optimal p_p, the rest shared
/// equally by the other detectors of the layout.
inline std::array<double, 3> optimal_splitter(Family f, std::int64_t l, Layout layout) {
    detail::require_layout(f, layout);
    double pp = optimal_pp(f, l);
    if (layout == Layout::TwoDetector) {
        return {0.0, pp, 1.0 - pp};
    }
    return {(1.0 - pp) / 2.0, pp, (1.0 - pp) / 2.0};
}

/// p_d^{n_m} p_p^{n_p} ((1 - p_p) / a)^{n_m - n_p}.
inline double splitter_instance_probability(double p_d, double p_p, std::int64_t n_m, std::int64_t n_p, int a) {
    detail::require_probability(p_d, "p_d");
    detail::require_probability(p_p, "p_p");
    return std::pow(p_d, static_cast<double>(n_m)) * std::pow(p_p, static_cast<double>(n_p)) *
           std::pow((1.0 - p_p) / a, static_cast<double>(n_m - n_p));
}

inline double optimal_instance_probability(Family f, std::int64_t l, double p_d, Layout layout) {
    detail::require_layout(f, layout);
    return splitter_instance_probability(p_d, optimal_pp(f, l), measured_count(l), preferred_count(f, l),
                                         off_preferred_detectors(layout));
}

/// Closed forms of the optimum in each family's natural layout:
///   Gamma1: (3/(l+1))^2 (p_d (l+1)/(l+4))^{(2l+8)/3}
///   Gamma2: (3/(l-2))^4 (p_d (l-2)/(l+4))^{(2l+8)/3}
/// Gamma2 at l = 2 has no Y slot; there p_p = 0 and the value is p_d^4 / 16.
inline double compact_instance_probability(Family f, std::int64_t l, double p_d) {
    detail::require_separation(l);
    detail::require_probability(p_d, "p_d");
    const double L = static_cast<double>(l);
    const double n_m = (2.0 * L + 8.0) / 3.0;
    if (f == Family::Gamma1) {
        return std::pow(3.0 / (L + 1.0), 2) * std::pow(p_d * (L + 1.0) / (L + 4.0), n_m);
    }
    if (l == 2) {
        return splitter_instance_probability(p_d, 0.0, 4, 0, 2);
    }
    return std::pow(3.0 / (L - 2.0), 4) * std::pow(p_d * (L - 2.0) / (L + 4.0), n_m);
}

/// Largest grid l whose optimized instance probability still gives
/// `min_instances` expected instances in `n_photons` photons; 0 if none.
inline std::int64_t max_direct_length(Family f, double p_d, double n_photons, double min_instances = 1.0,
                                      std::int64_t l_cap = 100000) {
    if (!(n_photons > 0.0) || !(min_instances > 0.0)) {
        throw std::invalid_argument("photon count and instance requirement must be positive");
    }
    const double threshold = min_instances / n_photons;
    std::int64_t best = 0;
    for (std::int64_t l = 2; l <= l_cap; l += 3) {
        if (optimal_instance_probability(f, l, p_d, natural_layout(f)) >= threshold) {
            best = l;
        }
    }
    return best;
}

}  // namespace csmg

#endif  // CSMG_PLANNER_HPP
