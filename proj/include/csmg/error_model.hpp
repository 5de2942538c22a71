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

#ifndef CSMG_ERROR_MODEL_HPP
#define CSMG_ERROR_MODEL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmg/entanglement.hpp"
#include "csmg/scan.hpp"
#include "csmg/templates.hpp"

namespace csmg {

/// How the Z(x)Z error count grows with l.
///
/// Asymptotic: both families decay as (1 - 2 p_zz)^(2l/3), the large-l form.
/// Exact: the number of adjacent pairs whose Z(x)Z error flips the template,
///        2(l+1)/3 for Gamma1 and 2(l+4)/3 for Gamma2. Same slope in l, but
///        family-dependent offsets that matter when fitting simulated data.
enum class DecayModel : std::uint8_t { Asymptotic, Exact };

inline std::string decay_model_name(DecayModel m) {
    return m == DecayModel::Asymptotic ? "asymptotic" : "exact";
}

inline DecayModel parse_decay_model(const std::string &s) {
    if (s == "asymptotic") {
        return DecayModel::Asymptotic;
    }
    if (s == "exact") {
        return DecayModel::Exact;
    }
    throw std::invalid_argument("unknown decay model '" + s + "' (expected asymptotic or exact)");
}

/// Exponent of (1 - 4 p_sigma / 3); l may be off-grid (used for crossings).
inline double pauli_exponent(double l) {
    return (2.0 * l + 8.0) / 3.0;
}

inline double zz_exponent(Family f, double l, DecayModel model) {
    if (model == DecayModel::Asymptotic) {
        return 2.0 * l / 3.0;
    }
    return f == Family::Gamma1 ? 2.0 * (l + 1.0) / 3.0 : 2.0 * (l + 4.0) / 3.0;
}

namespace detail {
inline void require_rates(double p_sigma, double p_zz) {
    if (!(p_sigma >= 0.0 && p_sigma <= 0.75)) {
        throw std::invalid_argument("p_sigma must lie in [0, 3/4]");
    }
    if (!(p_zz >= 0.0 && p_zz <= 0.5)) {
        throw std::invalid_argument("p_zz must lie in [0, 1/2]");
    }
}
}  // namespace detail

/// <Gamma> = (1 - 4 p_sigma/3)^{n_m} (1 - 2 p_zz)^{zz exponent}.
inline double predict_gamma(Family f, double l, double p_sigma, double p_zz,
                            DecayModel model = DecayModel::Asymptotic) {
    detail::require_rates(p_sigma, p_zz);
    return std::pow(1.0 - 4.0 * p_sigma / 3.0, pauli_exponent(l)) *
           std::pow(1.0 - 2.0 * p_zz, zz_exponent(f, l, model));
}

/// One observed decay point.
struct DecayPoint {
    Family family = Family::Gamma1;
    std::int64_t l = 0;
    double mean = 0;
    double std_error = 0;
};

inline std::vector<DecayPoint> decay_points(const std::vector<CorrelatorEstimate> &estimates) {
    std::vector<DecayPoint> out;
    for (const auto &e : estimates) {
        out.push_back({e.family, e.l, e.mean(), e.std_error()});
    }
    return out;
}

struct ErrorModelFit {
    DecayModel model = DecayModel::Exact;
    // ln(1 - 4 p_sigma / 3) and ln(1 - 2 p_zz), unconstrained.
    double alpha = 0;
    double beta = 0;
    std::array<std::array<double, 2>, 2> cov_alpha_beta{};
    // Rates clamped to [0, 3/4] x [0, 1/2]; `clamped` says it happened.
    double p_sigma = 0;
    double p_zz = 0;
    std::array<std::array<double, 2>, 2> covariance{};
    bool clamped = false;
    double chi2 = 0;
    std::int64_t dof = 0;
    // False when some point lacked a usable standard error; then all points
    // get unit weight and chi2 is a plain residual sum of squares.
    bool weighted = true;
    std::size_t points_used = 0;
    std::vector<std::string> dropped;

    double p_sigma_stderr() const {
        return std::sqrt(covariance[0][0]);
    }
    double p_zz_stderr() const {
        return std::sqrt(covariance[1][1]);
    }
    double chi2_per_dof() const {
        return dof > 0 ? chi2 / static_cast<double>(dof) : std::numeric_limits<double>::quiet_NaN();
    }
};

/// Weighted least squares of ln<Gamma> = n_m alpha + e_zz beta, which is
/// exactly linear in (alpha, beta). Weights come from the delta method,
/// sigma(ln mean) = stderr / mean. Points with non-positive means are
/// dropped and listed in `dropped`.
inline ErrorModelFit fit_error_model(const std::vector<DecayPoint> &points, DecayModel model = DecayModel::Exact) {
    struct Row {
        double a, b, y, sigma;
    };
    ErrorModelFit fit;
    fit.model = model;
    std::vector<Row> rows;
    std::set<std::int64_t> distinct_l;
    for (const auto &p : points) {
        std::string tag = family_name(p.family) + "_l" + std::to_string(p.l);
        if (!is_valid_separation(p.l)) {
            throw std::invalid_argument("invalid separation in decay point " + tag);
        }
        if (!(p.mean > 0.0)) {
            fit.dropped.push_back(tag);
            continue;
        }
        double l = static_cast<double>(p.l);
        rows.push_back({pauli_exponent(l), zz_exponent(p.family, l, model), std::log(p.mean), p.std_error / p.mean});
        distinct_l.insert(p.l);
    }
    if (distinct_l.size() < 2) {
        throw std::invalid_argument("error-model fit needs at least 2 distinct l values with positive means");
    }
    fit.weighted = std::all_of(rows.begin(), rows.end(), [](const Row &r) {
        return std::isfinite(r.sigma) && r.sigma > 0;
    });

    double saa = 0, sab = 0, sbb = 0, say = 0, sby = 0;
    for (const auto &r : rows) {
        double w = fit.weighted ? 1.0 / (r.sigma * r.sigma) : 1.0;
        saa += w * r.a * r.a;
        sab += w * r.a * r.b;
        sbb += w * r.b * r.b;
        say += w * r.a * r.y;
        sby += w * r.b * r.y;
    }
    double det = saa * sbb - sab * sab;
    if (!(det > 1e-12 * saa * sbb)) {
        throw std::invalid_argument("error-model fit is rank deficient");
    }
    fit.alpha = (sbb * say - sab * sby) / det;
    fit.beta = (saa * sby - sab * say) / det;
    fit.cov_alpha_beta = {{{sbb / det, -sab / det}, {-sab / det, saa / det}}};

    for (const auto &r : rows) {
        double w = fit.weighted ? 1.0 / (r.sigma * r.sigma) : 1.0;
        double resid = r.y - r.a * fit.alpha - r.b * fit.beta;
        fit.chi2 += w * resid * resid;
    }
    fit.points_used = rows.size();
    fit.dof = static_cast<std::int64_t>(rows.size()) - 2;

    double raw_sigma = 0.75 * (1.0 - std::exp(fit.alpha));
    double raw_zz = 0.5 * (1.0 - std::exp(fit.beta));
    fit.p_sigma = std::clamp(raw_sigma, 0.0, 0.75);
    fit.p_zz = std::clamp(raw_zz, 0.0, 0.5);
    fit.clamped = fit.p_sigma != raw_sigma || fit.p_zz != raw_zz;
    std::array<double, 2> jac{-0.75 * std::exp(fit.alpha), -0.5 * std::exp(fit.beta)};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            fit.covariance[i][j] = jac[i] * jac[j] * fit.cov_alpha_beta[i][j];
        }
    }
    return fit;
}

inline ErrorModelFit fit_error_model(const std::vector<CorrelatorEstimate> &estimates,
                                     DecayModel model = DecayModel::Exact) {
    std::vector<CorrelatorEstimate> with_matches;
    for (const auto &e : estimates) {
        if (e.match_count > 0) {
            with_matches.push_back(e);
        }
    }
    return fit_error_model(decay_points(with_matches), model);
}

/// Predicted correlators at (possibly off-grid) separation l from the
/// log-rates alpha = ln(1 - 4 p_sigma/3), beta = ln(1 - 2 p_zz).
inline TwoQubitMoments predicted_moments(double l, double alpha, double beta, DecayModel model) {
    double g1 = std::exp(pauli_exponent(l) * alpha + zz_exponent(Family::Gamma1, l, model) * beta);
    double g2 = std::exp(pauli_exponent(l) * alpha + zz_exponent(Family::Gamma2, l, model) * beta);
    return {g1, g1, g2};
}

/// 2 lambda_max - 1 of the predicted state; positive iff it is entangled.
inline double entanglement_margin(double l, double alpha, double beta, DecayModel model) {
    auto spectrum = rho_tilde_eigenvalues(predicted_moments(l, alpha, beta, model));
    return 2.0 * *std::max_element(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end()) - 1.0;
}

struct XiEstimate {
    // Largest l = 2 (mod 3) with a positive predicted bound; 0 if none.
    std::int64_t grid = 0;
    // Real l where the predicted concurrence reaches zero.
    double continuous = 0;
    double continuous_stderr = std::numeric_limits<double>::quiet_NaN();
    bool unbounded = false;
};

namespace detail {

inline double xi_crossing(double alpha, double beta, DecayModel model) {
    auto margin = [&](double l) {
        return entanglement_margin(l, alpha, beta, model);
    };
    if (margin(0.0) <= 0.0) {
        return 0.0;
    }
    double lo = 0.0, hi = 1.0;
    while (margin(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e15) {
            return std::numeric_limits<double>::infinity();
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (margin(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline std::int64_t xi_grid(double crossing, double alpha, double beta, DecayModel model) {
    // Largest grid point strictly below the crossing, then confirm against
    // the margin itself so rounding cannot move it.
    std::int64_t l = static_cast<std::int64_t>(std::floor(crossing));
    while (l >= 2 && !is_valid_separation(l)) {
        --l;
    }
    while (l >= 2 && entanglement_margin(static_cast<double>(l), alpha, beta, model) <= 0.0) {
        l -= 3;
    }
    while (entanglement_margin(static_cast<double>(l + 3), alpha, beta, model) > 0.0) {
        l += 3;
    }
    return l >= 2 ? l : 0;
}

}  // namespace detail

/// Entanglement length implied by error rates: where the predicted
/// Bell-diagonal state stops being entangled.
inline XiEstimate xi_e(double p_sigma, double p_zz, DecayModel model = DecayModel::Asymptotic) {
    detail::require_rates(p_sigma, p_zz);
    XiEstimate out;
    if (p_sigma == 0.0 && p_zz == 0.0) {
        out.unbounded = true;
        out.grid = std::numeric_limits<std::int64_t>::max();
        out.continuous = std::numeric_limits<double>::infinity();
        return out;
    }
    double alpha = std::log(1.0 - 4.0 * p_sigma / 3.0);
    double beta = std::log(1.0 - 2.0 * p_zz);
    out.continuous = detail::xi_crossing(alpha, beta, model);
    if (!std::isfinite(out.continuous)) {
        out.unbounded = true;
        out.grid = std::numeric_limits<std::int64_t>::max();
        return out;
    }
    out.grid = detail::xi_grid(out.continuous, alpha, beta, model);
    return out;
}

/// As above from a fit, with the crossing's standard error propagated from
/// the (alpha, beta) covariance by central differences.
inline XiEstimate xi_e(const ErrorModelFit &fit, DecayModel model = DecayModel::Asymptotic) {
    XiEstimate out = xi_e(fit.p_sigma, fit.p_zz, model);
    if (out.unbounded) {
        return out;
    }
    double alpha = std::log(1.0 - 4.0 * fit.p_sigma / 3.0);
    double beta = std::log(1.0 - 2.0 * fit.p_zz);
    auto cross = [&](double a, double b) {
        return detail::xi_crossing(a, b, model);
    };
    double ha = 1e-6 * std::max(1e-6, std::abs(alpha)), hb = 1e-6 * std::max(1e-6, std::abs(beta));
    double da = (cross(alpha + ha, beta) - cross(alpha - ha, beta)) / (2 * ha);
    double db = (cross(alpha, beta + hb) - cross(alpha, beta - hb)) / (2 * hb);
    if (alpha + ha > 0 || beta + hb > 0) {
        // One-sided at the zero-rate boundary.
        da = alpha + ha > 0 ? (cross(alpha, beta) - cross(alpha - ha, beta)) / ha : da;
        db = beta + hb > 0 ? (cross(alpha, beta) - cross(alpha, beta - hb)) / hb : db;
    }
    const auto &c = fit.cov_alpha_beta;
    double var = da * da * c[0][0] + 2 * da * db * c[0][1] + db * db * c[1][1];
    out.continuous_stderr = std::sqrt(std::max(0.0, var));
    return out;
}

/// Indirect bound rows from fitted rates for grid l up to `l_max`.
inline LEBoundTable indirect_bounds(const ErrorModelFit &fit, std::int64_t l_max,
                                    DecayModel model = DecayModel::Asymptotic) {
    LEBoundTable table;
    double alpha = std::log(1.0 - 4.0 * fit.p_sigma / 3.0);
    double beta = std::log(1.0 - 2.0 * fit.p_zz);
    for (std::int64_t l = 2; l <= l_max; l += 3) {
        LEBoundRow row;
        row.l = l;
        row.method = BoundMethod::Indirect;
        row.moments = predicted_moments(static_cast<double>(l), alpha, beta, model);
        row.eof = eof(row.moments);
        row.eof_conservative = row.eof;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace csmg

#endif  // CSMG_ERROR_MODEL_HPP
