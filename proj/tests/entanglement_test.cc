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


#include "csmg/entanglement.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace csmg;

namespace {

// Moments of a Bell-diagonal state with eigenvalues lam in the library's
// (s1, s2) order.
TwoQubitMoments moments_from_eigenvalues(const std::array<double, 4> &lam) {
    const int s1[4] = {1, 1, -1, -1}, s2[4] = {1, -1, 1, -1};
    TwoQubitMoments m;
    for (int k = 0; k < 4; ++k) {
        m.mu_yz += s1[k] * lam[k];
        m.mu_zy += s2[k] * lam[k];
        m.mu_xx += s1[k] * s2[k] * lam[k];
    }
    return m;
}

}  // namespace

TEST(entanglement, pure_cluster_pair_is_maximally_entangled) {
    TwoQubitMoments m{1, 1, 1};
    EXPECT_DOUBLE_EQ(concurrence(m), 1.0);
    EXPECT_DOUBLE_EQ(eof(m), 1.0);
    EXPECT_DOUBLE_EQ(eof({0, 0, 0}), 0.0);
}

TEST(entanglement, spectrum_matches_dense_matrix) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 200; ++i) {
        TwoQubitMoments m{u(gen) / 2, u(gen) / 2, u(gen) / 2};
        auto spectrum = rho_tilde_eigenvalues(m).eigenvalues;
        std::sort(spectrum.begin(), spectrum.end());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(oracle::bell_diagonal_rho(m.mu_yz, m.mu_zy, m.mu_xx));
        for (int k = 0; k < 4; ++k) {
            EXPECT_NEAR(spectrum[k], es.eigenvalues()(k), 1e-12);
        }
    }
}

TEST(entanglement, concurrence_matches_general_formula) {
    std::mt19937_64 gen(17);
    std::exponential_distribution<double> ex(1.0);
    for (int i = 0; i < 2000; ++i) {
        std::array<double, 4> lam;
        double total = 0;
        for (auto &x : lam) {
            x = ex(gen);
            total += x;
        }
        for (auto &x : lam) {
            x /= total;
        }
        auto m = moments_from_eigenvalues(lam);
        double want = oracle::wootters_concurrence(oracle::bell_diagonal_rho(m.mu_yz, m.mu_zy, m.mu_xx));
        ASSERT_NEAR(concurrence(m), want, 1e-10);
        ASSERT_NEAR(eof(m), oracle::eof_from_concurrence(want), 1e-9);
    }
}

TEST(entanglement, eof_is_monotone_in_concurrence) {
    double prev = -1;
    for (int i = 0; i <= 1000; ++i) {
        double e = eof_from_concurrence(i / 1000.0);
        EXPECT_GE(e, prev);
        prev = e;
    }
    EXPECT_DOUBLE_EQ(eof_from_concurrence(0), 0.0);
    EXPECT_DOUBLE_EQ(eof_from_concurrence(1), 1.0);
}

TEST(entanglement, separable_threshold) {
    // Isotropic moments: entangled iff g > 1/3.
    EXPECT_EQ(concurrence({0.33, 0.33, 0.33}), 0.0);
    EXPECT_GT(concurrence({0.34, 0.34, 0.34}), 0.0);
}

TEST(entanglement, positivity_violation_is_flagged_and_clamped) {
    TwoQubitMoments m{0.9, 0.9, -0.9};
    auto spectrum = rho_tilde_eigenvalues(m);
    EXPECT_TRUE(spectrum.positivity_violated);
    auto phys = physical_eigenvalues(spectrum);
    double total = 0;
    for (double x : phys) {
        EXPECT_GE(x, 0.0);
        total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-15);
    EXPECT_FALSE(rho_tilde_eigenvalues({0.5, 0.5, 0.5}).positivity_violated);
    EXPECT_THROW(rho_tilde_eigenvalues({1.5, 0, 0}), std::invalid_argument);
}

TEST(entanglement, shrink_toward_zero) {
    EXPECT_DOUBLE_EQ(shrink_toward_zero(0.5, 0.1), 0.4);
    EXPECT_DOUBLE_EQ(shrink_toward_zero(-0.5, 0.1), -0.4);
    EXPECT_DOUBLE_EQ(shrink_toward_zero(0.05, 0.1), 0.0);
}

TEST(entanglement, direct_bounds_table) {
    auto est = [](Family f, std::int64_t l, std::uint64_t n, std::int64_t s) {
        CorrelatorEstimate e;
        e.family = f;
        e.l = l;
        e.template_id = make_template(f, l).id();
        e.match_count = n;
        e.signed_sum = s;
        return e;
    };
    std::vector<CorrelatorEstimate> v{est(Family::Gamma1, 2, 1000, 900), est(Family::Gamma2, 2, 1000, 880),
                                      est(Family::Gamma1, 5, 100, 30), est(Family::Gamma2, 5, 100, 30),
                                      est(Family::Gamma1, 8, 10, 10)};
    auto table = direct_bounds(v);
    ASSERT_EQ(table.rows.size(), 2u);
    EXPECT_EQ(table.rows[0].l, 2);
    EXPECT_DOUBLE_EQ(table.rows[0].moments.mu_yz, 0.9);
    EXPECT_DOUBLE_EQ(table.rows[0].moments.mu_xx, 0.88);
    EXPECT_GT(table.rows[0].eof, table.rows[0].eof_conservative);
    EXPECT_GT(table.rows[0].eof_conservative, 0);
    // 0.3 is below the 1/3 threshold.
    EXPECT_EQ(table.rows[1].eof, 0.0);
    EXPECT_EQ(table.xi_e(), 2);
    EXPECT_THROW(direct_bounds(v, {8}), std::invalid_argument);
}
