// Copyright 2026 The qkdqcl Authors
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

#include "qkdqcl/bb84.h"

#include <gtest/gtest.h>

#include <cmath>

#include "qkdqcl/attacks.h"
#include "test_util.h"

using namespace qkdqcl;
using qkdqcl::testing::kPi;
using qkdqcl::testing::random_angles;
using qkdqcl::testing::random_scenario;
using qkdqcl::testing::shared_rng;

namespace {

std::map<WeightKey, std::vector<double>> basis_weights(std::vector<double> z, std::vector<double> x) {
    return {{WeightKey{Basis::Z, std::nullopt}, std::move(z)}, {WeightKey{Basis::X, std::nullopt}, std::move(x)}};
}

Scenario identity_scenario() { return Scenario{1, ParamCircuit(2), ParamCircuit(1), basis_weights({}, {}), {}}; }

// Eve copies the Z value into her register with a CNOT.
Scenario cnot_scenario() {
    ParamCircuit u(2);
    u.add(gates::cnot(0, 1));
    return Scenario{1, u, ParamCircuit(1), basis_weights({}, {}), {}};
}

double bound(double p, std::size_t n, double sigmas) { return sigmas * std::sqrt(p * (1 - p) / n) + 1e-12; }

}  // namespace

TEST(PrepareState, bb84_states) {
    EXPECT_EQ(prepare_state(0, Basis::Z)[0], Complex(1));
    EXPECT_EQ(prepare_state(1, Basis::Z)[1], Complex(1));
    EXPECT_NEAR(prepare_state(0, Basis::X)[1].real(), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(prepare_state(1, Basis::X)[1].real(), -M_SQRT1_2, 1e-15);
    for (Basis b : kBases) {
        const DensityMatrix one = DensityMatrix::from_pure(prepare_state(1, b));
        EXPECT_NEAR(fidelity_pure(prepare_state(0, b), one), 0, 1e-15);
    }
    EXPECT_THROW(prepare_state(2, Basis::Z), std::invalid_argument);
}

TEST(WeightKey, names_and_order) {
    EXPECT_EQ(weight_key_name({Basis::Z, std::nullopt}), "Z");
    EXPECT_LT((WeightKey{Basis::Z, std::nullopt}), (WeightKey{Basis::X, std::nullopt}));
    EXPECT_LT((WeightKey{Basis::Z, 0}), (WeightKey{Basis::Z, 1}));
}

TEST(EvaluateScenario, no_attack) {
    const FidelityReport r = evaluate_scenario(identity_scenario(), std::vector<double>{});
    EXPECT_NEAR(r.f_ab, 1, 1e-15);
    EXPECT_NEAR(r.f_ae, 0.5, 1e-15);
    EXPECT_NEAR(r.qber, 0, 1e-15);
}

TEST(EvaluateScenario, pccm_symmetric_point) {
    const FidelityReport r = evaluate_scenario(pccm_scenario(kPi / 2), std::vector<double>{});
    EXPECT_NEAR(r.f_ab, 0.8536, 1e-4);
    EXPECT_NEAR(r.f_ae, 0.8536, 1e-4);
    EXPECT_NEAR(r.f_ab_z, r.f_ab_x, 1e-12);
}

TEST(EvaluateScenario, cnot_copy_disturbs_x_only) {
    const Scenario s = cnot_scenario();
    const FidelityReport r = evaluate_scenario(s, std::vector<double>{});
    EXPECT_NEAR(r.f_ab_z, 1, 1e-15);
    EXPECT_NEAR(r.f_ab_x, 0.5, 1e-15);
    EXPECT_NEAR(r.f_ae_z, 1, 1e-15);
    EXPECT_NEAR(r.f_ae_x, 0.5, 1e-15);
    // F_AB = 1 exactly when Bob's marginal equals Alice's state, which fails here in X.
    const std::vector<std::size_t> line{0};
    const DensityMatrix bob = partial_trace(attacked_state(s, std::vector<double>{}, 0, Basis::X), line);
    EXPECT_GT(bob.matrix().max_abs_diff(prepare_state(0, Basis::X).projector()), 0.1);
}

TEST(EvaluateScenario, report_invariants) {
    auto &rng = shared_rng();
    for (int i = 0; i < 30; ++i) {
        const Scenario s = random_scenario(rng, 1 + i % 2);
        const FidelityReport r = evaluate_scenario(s, random_angles(s.attack.n_params(), rng));
        EXPECT_NEAR(r.qber + r.f_ab, 1, 1e-14);
        EXPECT_NEAR(r.f_ab, (r.f_ab_z + r.f_ab_x) / 2, 1e-14);
        EXPECT_NEAR(r.f_ae, (r.f_ae_z + r.f_ae_x) / 2, 1e-14);
        for (double f : {r.f_ab_z, r.f_ab_x, r.f_ae_z, r.f_ae_x}) {
            EXPECT_GE(f, -1e-12);
            EXPECT_LE(f, 1 + 1e-12);
        }
    }
}

TEST(EvaluateScenario, per_case_sum_is_order_independent) {
    auto &rng = shared_rng();
    for (int i = 0; i < 10; ++i) {
        const Scenario s = random_scenario(rng);
        const std::vector<double> theta = random_angles(s.attack.n_params(), rng);
        const FidelityReport r = evaluate_scenario(s, theta);
        for (Basis b : kBases) {
            double bob = 0;
            double eve = 0;
            for (int x : {1, 0}) {
                const DensityMatrix joint = attacked_state(s, theta, x, b);
                bob += bob_probability(joint, b, x) / 2;
                eve += eve_probability(s, joint, WeightKey{b, std::nullopt}, x) / 2;
            }
            EXPECT_NEAR(bob, b == Basis::Z ? r.f_ab_z : r.f_ab_x, 1e-14);
            EXPECT_NEAR(eve, b == Basis::Z ? r.f_ae_z : r.f_ae_x, 1e-14);
        }
    }
}

TEST(EvaluateScenario, rejects_malformed_scenarios) {
    Scenario missing = identity_scenario();
    missing.v_weights.erase(WeightKey{Basis::X, std::nullopt});
    EXPECT_THROW(evaluate_scenario(missing, std::vector<double>{}), std::invalid_argument);

    Scenario wide = identity_scenario();
    wide.attack = ParamCircuit(3);
    EXPECT_THROW(evaluate_scenario(wide, std::vector<double>{}), std::invalid_argument);

    Scenario big = identity_scenario();
    big.n_ancilla = 4;
    EXPECT_THROW(evaluate_scenario(big, std::vector<double>{}), std::invalid_argument);

    Scenario weights = pccm_scenario(1.0);
    weights.v_weights.begin()->second.push_back(0.0);
    EXPECT_THROW(evaluate_scenario(weights, std::vector<double>{}), std::invalid_argument);

    EXPECT_THROW(evaluate_scenario(pccm_family_scenario(), std::vector<double>{}), std::invalid_argument);

    Scenario noisy = identity_scenario();
    noisy.noise.push_back({NoiseKind::BitFlip, 0.1, 1});
    EXPECT_THROW(evaluate_scenario(noisy, std::vector<double>{}), std::invalid_argument);
}

TEST(EvaluateScenario, noise_ordering) {
    Scenario before = identity_scenario();
    before.noise.push_back({NoiseKind::BitFlip, 0.25, 0, Placement::BeforeAttack});
    const FidelityReport r = evaluate_scenario(before, std::vector<double>{});
    EXPECT_NEAR(r.f_ab_z, 0.75, 1e-14);
    EXPECT_NEAR(r.f_ab_x, 1, 1e-14);

    // Eve's CNOT copy sees before-attack flips but not after-attack ones.
    for (Placement p : {Placement::BeforeAttack, Placement::AfterAttack}) {
        Scenario s = cnot_scenario();
        s.noise.push_back({NoiseKind::BitFlip, 0.25, 0, p});
        const FidelityReport q = evaluate_scenario(s, std::vector<double>{});
        EXPECT_NEAR(q.f_ab_z, 0.75, 1e-14);
        EXPECT_NEAR(q.f_ae_z, p == Placement::BeforeAttack ? 0.75 : 1.0, 1e-14);
    }
}

TEST(FlatParams, round_trip) {
    auto &rng = shared_rng();
    Scenario s = random_scenario(rng);
    const std::size_t n = n_flat_params(s);
    EXPECT_EQ(n, s.attack.n_params() + 2 * s.measure.n_params());
    const std::vector<double> flat = random_angles(n, rng);
    Scenario copy = s;
    const std::vector<double> theta = unflatten_params(copy, flat);
    EXPECT_EQ(flatten_params(copy, theta), flat);
    const FidelityReport a = evaluate_flat(s, flat);
    const FidelityReport b = evaluate_scenario(copy, theta);
    EXPECT_EQ(a.f_ab, b.f_ab);
    EXPECT_EQ(a.f_ae, b.f_ae);
    EXPECT_THROW(unflatten_params(copy, std::vector<double>(n + 1)), std::invalid_argument);
}

TEST(DeriveSeed, distinct_and_stable) {
    EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
    EXPECT_NE(derive_seed(7, 3), derive_seed(7, 4));
    EXPECT_NE(derive_seed(7, 3), derive_seed(8, 3));
}

TEST(MonteCarlo, no_attack_has_zero_qber) {
    const ProtocolSample m = monte_carlo_protocol(identity_scenario(), std::vector<double>{}, 10000, 1);
    EXPECT_EQ(m.qber_hat, 0.0);
    EXPECT_EQ(m.n_rounds, 10000u);
    EXPECT_NEAR(static_cast<double>(m.n_sifted), 5000, 3 * std::sqrt(10000 * 0.25));
    EXPECT_NEAR(m.eve_match_hat, 0.5, bound(0.5, m.n_sifted, 4));
}

TEST(MonteCarlo, pccm_matches_analytic_qber) {
    const Scenario s = pccm_scenario(kPi / 2);
    const FidelityReport r = evaluate_scenario(s, std::vector<double>{});
    const ProtocolSample m = monte_carlo_protocol(s, std::vector<double>{}, 100000, 2024);
    EXPECT_NEAR(m.qber_hat, r.qber, bound(r.qber, m.n_sifted, 3));
    EXPECT_NEAR(m.eve_match_hat, r.f_ae, bound(r.f_ae, m.n_sifted, 3));
}

TEST(MonteCarlo, deterministic_per_seed) {
    const Scenario s = pccm_scenario(1.1);
    const ProtocolSample a = monte_carlo_protocol(s, std::vector<double>{}, 5000, 9);
    const ProtocolSample b = monte_carlo_protocol(s, std::vector<double>{}, 5000, 9);
    const ProtocolSample c = monte_carlo_protocol(s, std::vector<double>{}, 5000, 10);
    EXPECT_EQ(a.qber_hat, b.qber_hat);
    EXPECT_EQ(a.eve_match_hat, b.eve_match_hat);
    EXPECT_EQ(a.n_sifted, b.n_sifted);
    EXPECT_TRUE(a.qber_hat != c.qber_hat || a.n_sifted != c.n_sifted);
    EXPECT_THROW(monte_carlo_protocol(s, std::vector<double>{}, 0, 9), std::invalid_argument);
}

TEST(MonteCarlo, converges_on_random_scenarios) {
    auto &rng = shared_rng();
    for (int i = 0; i < 5; ++i) {
        const Scenario s = random_scenario(rng);
        const std::vector<double> theta = random_angles(s.attack.n_params(), rng);
        const FidelityReport r = evaluate_scenario(s, theta);
        const ProtocolSample m = monte_carlo_protocol(s, theta, 40000, 100 + i);
        EXPECT_NEAR(m.qber_hat, r.qber, bound(r.qber, m.n_sifted, 4));
        EXPECT_NEAR(m.eve_match_hat, r.f_ae, bound(r.f_ae, m.n_sifted, 4));
    }
}
