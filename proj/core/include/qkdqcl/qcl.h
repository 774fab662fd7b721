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

#ifndef QKDQCL_QCL_H
#define QKDQCL_QCL_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qkdqcl/bb84.h"
#include "qkdqcl/circuits.h"

namespace qkdqcl {

/// L = alpha_weight · (F_AB - target_f)² - F_AE.
struct LossConfig {
    double alpha_weight = 10;
    double target_f = 0.85;
};

struct TrainConfig {
    std::size_t n_steps = 100;
    double learning_rate = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double init_std = 0.1;
    std::uint64_t seed = 0;
    bool record_params = false;
};

/// Throws std::invalid_argument for out-of-range settings.
void validate(const LossConfig &cfg);
void validate(const TrainConfig &cfg);

struct TrainStep {
    std::size_t step;
    double f_ab;
    double f_ae;
    double loss;
    std::vector<double> params;  ///< empty unless record_params
};

struct TrainTrace {
    std::vector<TrainStep> steps;
    std::vector<double> final_params;  ///< after the last update
};

double loss(double f_ab, double f_ae, const LossConfig &cfg);

/// TwoTerm: [f(θ+π/2) - f(θ-π/2)]/2, exact for RX/RY/RZ.
/// FourTerm: the controlled-rotation rule with shifts π/2 and 3π/2, exact
/// for CRY whose generator has spectrum {0, ±1/2}.
enum class ShiftRule { TwoTerm, FourTerm };

/// Throws std::invalid_argument for gates without a rotation angle.
ShiftRule shift_rule_for(GateKind kind);

using VectorObjective = std::function<std::vector<double>(std::span<const double>)>;

/// Derivative of every component of `f` with respect to params[index], valid
/// when that parameter drives exactly one gate of the matching kind.
std::vector<double> shift_derivative(const VectorObjective &f, std::span<const double> params, std::size_t index,
                                     ShiftRule rule);

struct FidelityGradient {
    double d_f_ab;
    double d_f_ae;
};

/// ∂F_AB/∂p and ∂F_AE/∂p for flat index p (see flatten_params). Shared
/// parameters are handled by summing the shift rule over every gate that
/// reads the parameter. Throws std::out_of_range for an invalid index.
FidelityGradient fidelity_gradient(const Scenario &s, std::span<const double> flat, std::size_t index);

/// 2α(F_AB - f)∇F_AB - ∇F_AE over the whole flat vector.
std::vector<double> loss_gradient(const Scenario &s, std::span<const double> flat, const LossConfig &cfg);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t t = 0;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update in place.
void adam_step(std::vector<double> &params, AdamState &state, std::span<const double> grad, const TrainConfig &cfg);

/// Normal(0, init_std) draws from a generator seeded with cfg.seed.
std::vector<double> init_params(std::size_t n, const TrainConfig &cfg);

struct Evaluation {
    double loss;
    double f_ab;
    double f_ae;
    std::vector<double> grad;
};

using GradientObjective = std::function<Evaluation(std::span<const double>)>;

/// Fixed-length Adam descent; one trace record per step, taken before the
/// step's update.
TrainTrace descend(const GradientObjective &objective, std::vector<double> init, const TrainConfig &cfg);

/// HEA attack on line + register and a register HEA for V with one
/// zero-initialized weight set per sifted basis.
Scenario hea_scenario(std::size_t n_ancilla, std::size_t u_layers, std::size_t v_layers,
                      std::vector<NoiseChannel> noise = {});

/// Trains U's theta and every V weight set of `s` jointly.
TrainTrace train(const Scenario &s, const LossConfig &loss_cfg, const TrainConfig &train_cfg);

}  // namespace qkdqcl

#endif
