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


#include "csmg/planner.hpp"

#include <gtest/gtest.h>

using namespace csmg;

TEST(planner, naive_tomography) {
    EXPECT_EQ(naive_tomography_K(0.1, 1e10), 6);
    EXPECT_EQ(naive_tomography_K(0.5, 1e10), 11);
    EXPECT_EQ(naive_tomography_K(0.9, 1e10), 15);
    // Brute force: largest K with (4/p_d)^K <= N.
    for (double pd : {0.05, 0.3, 0.77, 1.0}) {
        for (double n : {1e3, 1e7, 1e10}) {
            std::int64_t k = 0;
            while (std::pow(4 / pd, static_cast<double>(k + 1)) <= n) {
                ++k;
            }
            EXPECT_EQ(naive_tomography_K(pd, n), k) << pd << " " << n;
        }
    }
    EXPECT_THROW(naive_tomography_K(0, 1e10), std::invalid_argument);
}

TEST(planner, photons_in_default_experiment) {
    EXPECT_DOUBLE_EQ(photons_in(kDefaultMeasurementTime, kDefaultTauEm), 1e10);
}

TEST(planner, compact_forms_match_general_product) {
    for (double pd : {0.1, 0.5, 0.9, 1.0}) {
        for (std::int64_t l = 2; l <= 80; l += 3) {
            for (Family f : {Family::Gamma1, Family::Gamma2}) {
                double general = optimal_instance_probability(f, l, pd, natural_layout(f));
                double compact = compact_instance_probability(f, l, pd);
                EXPECT_NEAR(compact / general, 1.0, 1e-12) << family_name(f) << " l=" << l << " pd=" << pd;
            }
        }
    }
    EXPECT_DOUBLE_EQ(compact_instance_probability(Family::Gamma2, 2, 0.5), std::pow(0.5, 4) / 16);
}

TEST(planner, optimal_pp_maximizes) {
    for (std::int64_t l = 5; l <= 50; l += 3) {
        for (Family f : {Family::Gamma1, Family::Gamma2}) {
            Layout layout = natural_layout(f);
            int a = off_preferred_detectors(layout);
            double best = optimal_instance_probability(f, l, 0.7, layout);
            for (int k = 1; k < 1000; ++k) {
                double p = splitter_instance_probability(0.7, k / 1000.0, measured_count(l), preferred_count(f, l), a);
                ASSERT_LE(p, best * (1 + 1e-12));
            }
        }
    }
}

TEST(planner, optimum_bounds_every_splitter) {
    // Template-level probability over random routing vectors never beats the
    // optimized layout value.
    auto t1 = make_gamma1(11);
    auto t2 = make_gamma2(11);
    double b1 = optimal_instance_probability(Family::Gamma1, 11, 0.6, Layout::TwoDetector);
    double b2 = optimal_instance_probability(Family::Gamma2, 11, 0.6, Layout::ThreeDetector);
    for (int i = 1; i < 50; ++i) {
        for (int j = 1; i + j < 50; ++j) {
            double qx = i / 50.0, qy = j / 50.0, qz = 1 - qx - qy;
            EXPECT_LE(instance_probability(t2, 0.6, qx, qy, qz), b2 * (1 + 1e-12));
        }
        double qy = i / 50.0;
        EXPECT_LE(instance_probability(t1, 0.6, 0, qy, 1 - qy), b1 * (1 + 1e-12));
    }
    auto q = optimal_splitter(Family::Gamma2, 11, Layout::ThreeDetector);
    EXPECT_NEAR(instance_probability(t2, 0.6, q[0], q[1], q[2]), b2, 1e-15);
}

TEST(planner, monotone_in_detection) {
    for (std::int64_t l = 2; l <= 50; l += 3) {
        double prev = 0;
        for (int k = 1; k <= 100; ++k) {
            double p = instance_probability(Family::Gamma2, l, k / 100.0, 0.25, 0.5, 0.25, Layout::ThreeDetector);
            EXPECT_GT(p, prev);
            prev = p;
        }
    }
}

TEST(planner, layout_rules) {
    EXPECT_THROW(instance_probability(Family::Gamma2, 5, 0.5, 0, 0.5, 0.5, Layout::TwoDetector), std::invalid_argument);
    EXPECT_THROW(instance_probability(Family::Gamma1, 5, 0.5, 0.1, 0.5, 0.4, Layout::TwoDetector),
                 std::invalid_argument);
    EXPECT_THROW(instance_probability(make_gamma1(5), 0.5, 0.1, 0.5, 0.5), std::invalid_argument);
}

TEST(planner, direct_reach) {
    auto l01 = max_direct_length(Family::Gamma2, 0.1, 1e10);
    auto l05 = max_direct_length(Family::Gamma2, 0.5, 1e10);
    auto l09 = max_direct_length(Family::Gamma2, 0.9, 1e10);
    EXPECT_GE(l01, 5);
    EXPECT_LE(l01, 6);
    EXPECT_NEAR(static_cast<double>(l05), 20, 3);
    EXPECT_NEAR(static_cast<double>(l09), 80, 3);
    EXPECT_GE(max_direct_length(Family::Gamma1, 0.5, 1e10), l05);
    // A stricter instance requirement can only shorten the reach.
    EXPECT_LE(max_direct_length(Family::Gamma2, 0.5, 1e10, 100), l05);
    EXPECT_EQ(max_direct_length(Family::Gamma2, 0.01, 10), 0);
}
