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


#include "csmg/error_model.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace csmg;

TEST(error_model, predictions) {
    const double ps = 0.01, pzz = 0.02;
    for (std::int64_t l = 2; l <= 50; l += 3) {
        double L = static_cast<double>(l);
        double asym = std::pow(1 - 4 * ps / 3, (2 * L + 8) / 3) * std::pow(1 - 2 * pzz, 2 * L / 3);
        EXPECT_NEAR(predict_gamma(Family::Gamma1, L, ps, pzz), asym, 1e-14);
        EXPECT_NEAR(predict_gamma(Family::Gamma2, L, ps, pzz), asym, 1e-14);
        for (Family f : {Family::Gamma1, Family::Gamma2}) {
            auto t = make_template(f, l);
            double exact = std::pow(1 - 4 * ps / 3, static_cast<double>(pauli_flip_count(t))) *
                           std::pow(1 - 2 * pzz, static_cast<double>(zz_flip_count(t)));
            EXPECT_NEAR(predict_gamma(f, L, ps, pzz, DecayModel::Exact), exact, 1e-14) << t.id();
        }
    }
    EXPECT_THROW(predict_gamma(Family::Gamma1, 2, 0.8, 0), std::invalid_argument);
    EXPECT_THROW(predict_gamma(Family::Gamma1, 2, 0, 0.6), std::invalid_argument);
}

TEST(error_model, fit_recovers_exact_data) {
    for (auto model : {DecayModel::Exact, DecayModel::Asymptotic}) {
        std::vector<DecayPoint> pts;
        for (std::int64_t l = 2; l <= 14; l += 3) {
            for (Family f : {Family::Gamma1, Family::Gamma2}) {
                double m = predict_gamma(f, static_cast<double>(l), 0.004, 0.015, model);
                pts.push_back({f, l, m, 1e-3});
            }
        }
        auto fit = fit_error_model(pts, model);
        EXPECT_NEAR(fit.p_sigma, 0.004, 1e-10);
        EXPECT_NEAR(fit.p_zz, 0.015, 1e-10);
        EXPECT_NEAR(fit.chi2, 0, 1e-12);
        EXPECT_EQ(fit.dof, 8);
        EXPECT_TRUE(fit.weighted);
        EXPECT_FALSE(fit.clamped);
    }
}

TEST(error_model, fit_pulls_are_standard_normal) {
    // Gaussian noise at the quoted standard errors; the fitted rates'
    // pulls should have mean ~0 and spread ~1, and chi2/dof ~1.
    std::mt19937_64 gen(12);
    std::normal_distribution<double> normal;
    const double ps = 0.002, pzz = 0.01;
    const int reps = 400;
    double sum_s = 0, sum_s2 = 0, sum_z = 0, sum_z2 = 0, chi = 0;
    for (int r = 0; r < reps; ++r) {
        std::vector<DecayPoint> pts;
        for (std::int64_t l = 2; l <= 11; l += 3) {
            for (Family f : {Family::Gamma1, Family::Gamma2}) {
                double m = predict_gamma(f, static_cast<double>(l), ps, pzz, DecayModel::Exact);
                double se = 2e-4 * (1 + l / 5.0);
                pts.push_back({f, l, m + se * normal(gen), se});
            }
        }
        auto fit = fit_error_model(pts);
        double a = (fit.p_sigma - ps) / fit.p_sigma_stderr(), b = (fit.p_zz - pzz) / fit.p_zz_stderr();
        sum_s += a;
        sum_s2 += a * a;
        sum_z += b;
        sum_z2 += b * b;
        chi += fit.chi2_per_dof();
    }
    EXPECT_LT(std::abs(sum_s / reps), 0.2);
    EXPECT_LT(std::abs(sum_z / reps), 0.2);
    EXPECT_NEAR(std::sqrt(sum_s2 / reps), 1.0, 0.15);
    EXPECT_NEAR(std::sqrt(sum_z2 / reps), 1.0, 0.15);
    EXPECT_NEAR(chi / reps, 1.0, 0.15);
}

TEST(error_model, fit_preconditions) {
    std::vector<DecayPoint> one_l{{Family::Gamma1, 2, 0.9, 0.01}, {Family::Gamma2, 2, 0.9, 0.01}};
    EXPECT_THROW(fit_error_model(one_l), std::invalid_argument);
    std::vector<DecayPoint> bad_l{{Family::Gamma1, 3, 0.9, 0.01}};
    EXPECT_THROW(fit_error_model(bad_l), std::invalid_argument);
    // Non-positive means are dropped, not fitted.
    std::vector<DecayPoint> pts{{Family::Gamma1, 2, 0.9, 0.01},
                                {Family::Gamma1, 5, 0.8, 0.01},
                                {Family::Gamma2, 5, 0.8, 0.01},
                                {Family::Gamma1, 8, -0.1, 0.2}};
    auto fit = fit_error_model(pts);
    EXPECT_EQ(fit.points_used, 3u);
    ASSERT_EQ(fit.dropped.size(), 1u);
    EXPECT_EQ(fit.dropped[0], "gamma1_l8");
}

TEST(error_model, zero_stderr_falls_back_to_unit_weights) {
    std::vector<DecayPoint> pts{{Family::Gamma1, 2, 1.0, 0.0}, {Family::Gamma1, 5, 1.0, 0.0},
                                {Family::Gamma2, 5, 1.0, 0.0}};
    auto fit = fit_error_model(pts);
    EXPECT_FALSE(fit.weighted);
    EXPECT_NEAR(fit.p_sigma, 0, 1e-15);
    EXPECT_NEAR(fit.p_zz, 0, 1e-15);
}

TEST(error_model, rates_are_clamped_to_domain) {
    // Means that grow with l imply negative rates.
    std::vector<DecayPoint> pts{{Family::Gamma1, 2, 0.90, 0.001}, {Family::Gamma1, 5, 0.95, 0.001},
                                {Family::Gamma2, 5, 0.95, 0.001}, {Family::Gamma2, 8, 0.97, 0.001}};
    auto fit = fit_error_model(pts);
    EXPECT_TRUE(fit.clamped);
    EXPECT_GE(fit.p_sigma, 0.0);
    EXPECT_GE(fit.p_zz, 0.0);
}

TEST(error_model, xi_closed_forms) {
    struct Case {
        double ps, pzz;
        std::int64_t grid;
        double continuous;
    };
    for (auto c : {Case{0, 0.05, 14, 15.6}, Case{0, 0.01, 80, 81.6}, Case{0.002, 0.01, 71, 71.6}}) {
        auto xi = xi_e(c.ps, c.pzz);
        auto want = oracle::xi_closed_form(c.ps, c.pzz);
        EXPECT_EQ(xi.grid, c.grid);
        EXPECT_EQ(xi.grid, want.grid);
        EXPECT_NEAR(xi.continuous, want.continuous, 1e-8);
        EXPECT_NEAR(xi.continuous, c.continuous, 0.05);
    }
    EXPECT_NEAR(xi_e(0, 0.05).continuous, 3 * std::log(3.0) / (2 * -std::log(0.9)), 1e-9);
    auto unbounded = xi_e(0, 0);
    EXPECT_TRUE(unbounded.unbounded);
    EXPECT_TRUE(std::isinf(unbounded.continuous));
}

TEST(error_model, xi_is_monotone_in_noise) {
    double prev = 1e300;
    for (double pzz = 0.001; pzz < 0.2; pzz *= 1.3) {
        double x = xi_e(0.002, pzz).continuous;
        EXPECT_LT(x, prev);
        prev = x;
    }
}

TEST(error_model, xi_stderr_matches_finite_difference_oracle) {
    ErrorModelFit fit;
    fit.p_sigma = 0.002;
    fit.p_zz = 0.01;
    fit.alpha = std::log(1 - 4 * 0.002 / 3);
    fit.beta = std::log(1 - 0.02);
    fit.cov_alpha_beta = {{{1e-8, -2e-9}, {-2e-9, 4e-8}}};
    auto xi = xi_e(fit);
    // Closed form of the asymptotic crossing: g(l) = 1/3 with
    // ln g = ((2l+8)/3) alpha + (2l/3) beta  =>  l = (-ln 3 - 8 alpha/3) / (2 (alpha + beta) / 3).
    auto crossing = [](double a, double b) {
        return (-std::log(3.0) - 8 * a / 3) / (2 * (a + b) / 3);
    };
    EXPECT_NEAR(xi.continuous, crossing(fit.alpha, fit.beta), 1e-8);
    double h = 1e-7;
    double da = (crossing(fit.alpha + h, fit.beta) - crossing(fit.alpha - h, fit.beta)) / (2 * h);
    double db = (crossing(fit.alpha, fit.beta + h) - crossing(fit.alpha, fit.beta - h)) / (2 * h);
    const auto &c = fit.cov_alpha_beta;
    double se = std::sqrt(da * da * c[0][0] + 2 * da * db * c[0][1] + db * db * c[1][1]);
    EXPECT_NEAR(xi.continuous_stderr, se, 1e-4 * se);
}

TEST(error_model, indirect_bounds) {
    ErrorModelFit fit;
    fit.p_sigma = 0;
    fit.p_zz = 0.05;
    auto table = indirect_bounds(fit, 50);
    EXPECT_EQ(table.xi_e(), 14);
    EXPECT_EQ(table.rows.front().method, BoundMethod::Indirect);
}
