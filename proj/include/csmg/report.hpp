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


#ifndef CSMG_REPORT_HPP
#define CSMG_REPORT_HPP

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "csmg/entanglement.hpp"
#include "csmg/error_model.hpp"
#include "csmg/estimates_csv.hpp"
#include "csmg/planner.hpp"
#include "csmg/templates.hpp"

namespace csmg {

// Plot-ready tables. Column orders here are part of the file format.

/// Naive tomography reach for each detection efficiency.
inline std::string naive_tomography_csv(const std::vector<double> &p_ds, double n_photons) {
    std::ostringstream out;
    out << "p_d,n_photons,naive_K\n";
    for (double p_d : p_ds) {
        out << format_double(p_d) << ',' << format_double(n_photons) << ',' << naive_tomography_K(p_d, n_photons)
            << '\n';
    }
    return out.str();
}

/// Longest directly measurable l per family vs detection efficiency,
/// p_d = 0.05, 0.06, ..., 0.95.
inline std::string max_length_csv(double n_photons, double min_instances = 1.0) {
    std::ostringstream out;
    out << "p_d,gamma1_max_l,gamma2_max_l,naive_K\n";
    for (int k = 5; k <= 95; ++k) {
        double p_d = k / 100.0;
        out << format_double(p_d) << ',' << max_direct_length(Family::Gamma1, p_d, n_photons, min_instances) << ','
            << max_direct_length(Family::Gamma2, p_d, n_photons, min_instances) << ','
            << naive_tomography_K(p_d, n_photons) << '\n';
    }
    return out.str();
}

/// xi_E vs p_zz for each p_sigma; p_zz log-spaced over [0.001, 0.2].
inline std::string xi_curve_csv(const std::vector<double> &p_sigmas, int points = 100,
                                DecayModel model = DecayModel::Asymptotic) {
    std::ostringstream out;
    out << "p_sigma,p_zz,xi_grid,xi_continuous\n";
    const double lo = std::log(0.001), hi = std::log(0.2);
    for (double ps : p_sigmas) {
        for (int i = 0; i < points; ++i) {
            double pzz = i + 1 == points ? 0.2 : std::exp(lo + (hi - lo) * i / (points - 1));
            auto xi = xi_e(ps, pzz, model);
            out << format_double(ps) << ',' << format_double(pzz) << ',' << xi.grid << ','
                << format_double(xi.continuous) << '\n';
        }
    }
    return out.str();
}

/// Per-family planning table for one (p_d, N).
inline std::string plan_csv(double p_d, double n_photons, double min_instances = 1.0) {
    std::ostringstream out;
    out << "family,layout,max_l,optimal_p_p,instance_probability,expected_instances\n";
    for (Family f : {Family::Gamma1, Family::Gamma2}) {
        std::int64_t l = max_direct_length(f, p_d, n_photons, min_instances);
        out << family_name(f) << ',' << layout_name(natural_layout(f)) << ',' << l << ',';
        if (l == 0) {
            out << "nan,0,0\n";
            continue;
        }
        double p = optimal_instance_probability(f, l, p_d, natural_layout(f));
        out << format_double(optimal_pp(f, l)) << ',' << format_double(p) << ',' << format_double(p * n_photons)
            << '\n';
    }
    return out.str();
}

inline std::string bound_table_csv(const LEBoundTable &table) {
    std::ostringstream out;
    out << "l,method,mu_yz,mu_zy,mu_xx,eof,eof_conservative,clamped,se_gamma1,se_gamma2\n";
    for (const auto &r : table.rows) {
        out << r.l << ',' << bound_method_name(r.method) << ',' << format_double(r.moments.mu_yz) << ','
            << format_double(r.moments.mu_zy) << ',' << format_double(r.moments.mu_xx) << ',' << format_double(r.eof)
            << ',' << format_double(r.eof_conservative) << ',' << (r.clamped ? 1 : 0) << ','
            << format_double(r.se_gamma1) << ',' << format_double(r.se_gamma2) << '\n';
    }
    return out.str();
}

inline std::string verification_csv(const std::vector<VerificationReport> &reports) {
    std::ostringstream out;
    out << "template,algebraic,dynamic,phase,message\n";
    for (const auto &r : reports) {
        out << r.template_id << ',' << (r.algebraic_ok ? "ok" : "fail") << ',' << (r.dynamic_ok ? "ok" : "fail")
            << ',' << r.phase.str() << ',' << r.message << '\n';
    }
    return out.str();
}

namespace detail {
inline nlohmann::json json_number(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v));
}
}  // namespace detail

inline nlohmann::json to_json(const LEBoundTable &table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : table.rows) {
        rows.push_back({
            {"l", r.l},
            {"method", bound_method_name(r.method)},
            {"mu_yz", detail::json_number(r.moments.mu_yz)},
            {"mu_zy", detail::json_number(r.moments.mu_zy)},
            {"mu_xx", detail::json_number(r.moments.mu_xx)},
            {"eof", detail::json_number(r.eof)},
            {"eof_conservative", detail::json_number(r.eof_conservative)},
            {"clamped", r.clamped},
        });
    }
    return {{"rows", rows}, {"xi_e", table.xi_e()}};
}

inline nlohmann::json to_json(const ErrorModelFit &fit) {
    return {
        {"model", decay_model_name(fit.model)},
        {"p_sigma", detail::json_number(fit.p_sigma)},
        {"p_sigma_stderr", detail::json_number(fit.p_sigma_stderr())},
        {"p_zz", detail::json_number(fit.p_zz)},
        {"p_zz_stderr", detail::json_number(fit.p_zz_stderr())},
        {"covariance", fit.covariance},
        {"alpha", detail::json_number(fit.alpha)},
        {"beta", detail::json_number(fit.beta)},
        {"clamped", fit.clamped},
        {"chi2", detail::json_number(fit.chi2)},
        {"dof", fit.dof},
        {"chi2_per_dof", detail::json_number(fit.chi2_per_dof())},
        {"weighted", fit.weighted},
        {"points_used", fit.points_used},
        {"dropped", fit.dropped},
    };
}

inline nlohmann::json to_json(const XiEstimate &xi) {
    return {
        {"grid", xi.unbounded ? nlohmann::json("inf") : nlohmann::json(xi.grid)},
        {"continuous", detail::json_number(xi.continuous)},
        {"continuous_stderr", detail::json_number(xi.continuous_stderr)},
        {"unbounded", xi.unbounded},
    };
}

struct Analysis {
    LEBoundTable direct;
    bool has_fit = false;
    ErrorModelFit fit;
    LEBoundTable indirect;
    XiEstimate xi;
    std::string fit_error;
};

/// Direct bounds from every l with both families, plus the error-model fit
/// and the indirect extrapolation when the estimates support one.
inline Analysis analyze(const std::vector<CorrelatorEstimate> &estimates, DecayModel fit_model = DecayModel::Exact,
                        std::int64_t indirect_l_max = 200) {
    Analysis a;
    a.direct = direct_bounds(estimates);
    try {
        a.fit = fit_error_model(estimates, fit_model);
        a.has_fit = true;
        a.xi = xi_e(a.fit, fit_model);
        a.indirect = indirect_bounds(a.fit, indirect_l_max, fit_model);
    } catch (const std::invalid_argument &ex) {
        a.fit_error = ex.what();
    }
    return a;
}

inline nlohmann::json to_json(const Analysis &a) {
    nlohmann::json j{{"direct", to_json(a.direct)}};
    if (a.has_fit) {
        j["fit"] = to_json(a.fit);
        j["xi_e"] = to_json(a.xi);
        j["indirect"] = to_json(a.indirect);
    } else {
        j["fit"] = nullptr;
        j["fit_error"] = a.fit_error;
    }
    return j;
}

}  // namespace csmg

#endif  // CSMG_REPORT_HPP
