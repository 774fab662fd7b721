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

#ifndef QKDQCL_BB84_H
#define QKDQCL_BB84_H

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qkdqcl/basis.h"
#include "qkdqcl/channels.h"
#include "qkdqcl/circuits.h"
#include "qkdqcl/qmat.h"

namespace qkdqcl {

/// One use of the line. b_e is the basis Eve learns at sifting.
struct Transmission {
    int x;
    Basis b_a;
    Basis b_b;
    Basis b_e;

    bool sifted() const { return b_a == b_b; }
};

/// Classical information Eve conditions her delayed unitary on.
struct WeightKey {
    Basis basis = Basis::Z;
    std::optional<int> parity;

    auto operator<=>(const WeightKey &) const = default;
};

std::string weight_key_name(const WeightKey &key);

/// One individual-attack experiment. Qubit 0 of `attack` is the line qubit,
/// qubits 1..n_ancilla are Eve's register; `measure` acts on the register
/// alone and reads its parameters from the weight set selected by the
/// sifted basis.
struct Scenario {
    std::size_t n_ancilla;
    ParamCircuit attack;
    ParamCircuit measure;
    std::map<WeightKey, std::vector<double>> v_weights;
    std::vector<NoiseChannel> noise;
};

/// Throws std::invalid_argument describing the first shape problem found.
void validate_scenario(const Scenario &s);

struct FidelityReport {
    double f_ab_z = 0;
    double f_ab_x = 0;
    double f_ab = 0;
    double f_ae_z = 0;
    double f_ae_x = 0;
    double f_ae = 0;
    double qber = 0;

    double c_ab_z() const { return 2 * f_ab_z - 1; }
    double c_ab_x() const { return 2 * f_ab_x - 1; }
    double c_ab() const { return 2 * f_ab - 1; }
    double c_ae_z() const { return 2 * f_ae_z - 1; }
    double c_ae_x() const { return 2 * f_ae_x - 1; }
    double c_ae() const { return 2 * f_ae - 1; }
};

/// |0⟩, |1⟩ for the Z basis and |+⟩, |−⟩ for the X basis.
PureState prepare_state(int x, Basis basis);

/// Joint line+register state after the before-attack noise, U(theta) and the
/// after-attack noise, for Alice's preparation (x, basis).
DensityMatrix attacked_state(const Scenario &s, std::span<const double> theta, int x, Basis basis);

/// Probability that Bob, measuring the line qubit of `joint` in `basis`, reads `outcome`.
double bob_probability(const DensityMatrix &joint, Basis basis, int outcome);

/// Probability that Eve's readout (register qubit 0, Z basis) yields `outcome`
/// after V with the weights for `key`.
double eve_probability(const Scenario &s, const DensityMatrix &joint, const WeightKey &key, int outcome);

/// Averages over the four sifted preparations, using the scenario's own
/// weight sets for V.
FidelityReport evaluate_scenario(const Scenario &s, std::span<const double> theta);

/// Layout of the flat trainable vector: theta first, then each weight set in
/// key order.
std::size_t n_flat_params(const Scenario &s);
std::vector<double> flatten_params(const Scenario &s, std::span<const double> theta);
/// Returns theta and writes the weight sets from `flat` into `s`.
std::vector<double> unflatten_params(Scenario &s, std::span<const double> flat);
FidelityReport evaluate_flat(const Scenario &s, std::span<const double> flat);

/// Deterministic 64-bit stream for round `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct ProtocolSample {
    double qber_hat = 0;
    double eve_match_hat = 0;
    std::size_t n_sifted = 0;
    std::size_t n_rounds = 0;
    std::uint64_t seed = 0;
};

/// Samples full BB84 rounds (uniform x, b_A, b_B), keeps the sifted ones and
/// reports empirical error and Eve-agreement rates.
ProtocolSample monte_carlo_protocol(const Scenario &s, std::span<const double> theta, std::size_t n_rounds,
                                    std::uint64_t seed);

}  // namespace qkdqcl

#endif
