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


#include "csmg/pauli.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace csmg;

namespace {

PauliString random_pauli(std::mt19937_64 &gen, int n) {
    std::string text;
    text += "+-"[gen() & 1];
    if (gen() & 1) {
        text += 'i';
    }
    for (int q = 0; q < n; ++q) {
        text += "IXYZ"[gen() & 3];
    }
    return PauliString::from_dense(text);
}

bool matrices_equal(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    return (a - b).cwiseAbs().maxCoeff() < 1e-12;
}

}  // namespace

TEST(pauli, letter_products_match_matrices) {
    for (char a : std::string("IXYZ")) {
        for (char b : std::string("IXYZ")) {
            auto pa = PauliString::single(0, letter_from_char(a));
            auto pb = PauliString::single(0, letter_from_char(b));
            EXPECT_TRUE(matrices_equal(oracle::dense_matrix(pa * pb, 1),
                                       oracle::dense_matrix(pa, 1) * oracle::dense_matrix(pb, 1)))
                << a << b;
        }
    }
}

TEST(pauli, multiply_matches_dense_matrices) {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 300; ++trial) {
        auto a = random_pauli(gen, 3);
        auto b = random_pauli(gen, 3);
        auto ma = oracle::dense_matrix(a, 3), mb = oracle::dense_matrix(b, 3);
        ASSERT_TRUE(matrices_equal(oracle::dense_matrix(a * b, 3), ma * mb)) << a.str() << " * " << b.str();
        ASSERT_EQ(a.commutes_with(b), matrices_equal(ma * mb, mb * ma)) << a.str() << " , " << b.str();
    }
}

TEST(pauli, phase_arithmetic) {
    EXPECT_EQ(Phase::plus_i() * Phase::plus_i(), Phase::minus_one());
    EXPECT_EQ(Phase::minus_i() * Phase::plus_i(), Phase::plus_one());
    EXPECT_EQ(Phase::from_power(7), Phase::minus_i());
    EXPECT_TRUE(Phase::minus_one().is_real());
    EXPECT_FALSE(Phase::plus_i().is_real());
    EXPECT_EQ(Phase::minus_one().sign(), -1);
}

TEST(pauli, parse_and_print) {
    auto p = PauliString::from_dense("-X_Z", 4);
    EXPECT_EQ(p.at(4), PauliLetter::X);
    EXPECT_EQ(p.at(5), PauliLetter::I);
    EXPECT_EQ(p.at(6), PauliLetter::Z);
    EXPECT_EQ(p.weight(), 2u);
    EXPECT_EQ(p.phase(), Phase::minus_one());
    EXPECT_EQ(p.str(), "-X4 Z6");
    EXPECT_FALSE(PauliString::from_dense("iXY").is_hermitian());
    EXPECT_THROW(PauliString::from_dense("+XQ"), std::invalid_argument);
}

TEST(pauli, cluster_stabilizers) {
    auto k = cluster_stabilizer(5);
    EXPECT_EQ(k, PauliString::from_dense("+ZXZ", 4));
    for (int i = 1; i < 8; ++i) {
        for (int j = 1; j < 8; ++j) {
            EXPECT_TRUE(cluster_stabilizer(i).commutes_with(cluster_stabilizer(j)));
        }
    }
    // K1 K2 = Z0 (XZ)1 (ZX)2 Z3 = +Z Y Y Z.
    EXPECT_EQ(cluster_stabilizer(1) * cluster_stabilizer(2), PauliString::from_dense("+ZYYZ"));
}

TEST(pauli, cluster_stabilizers_hold_on_dense_cluster) {
    auto s = oracle::linear_cluster(6);
    for (int i = 1; i < 5; ++i) {
        EXPECT_NEAR(s.expectation(cluster_stabilizer(i)), 1.0, 1e-12);
    }
    EXPECT_NEAR(s.expectation(PauliString::from_dense("+XZ")), 1.0, 1e-12);
    EXPECT_NEAR(s.expectation(PauliString::from_dense("+Z")), 0.0, 1e-12);
}
