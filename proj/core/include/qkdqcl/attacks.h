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

#ifndef QKDQCL_ATTACKS_H
#define QKDQCL_ATTACKS_H

#include <span>
#include <vector>

#include "qkdqcl/bb84.h"
#include "qkdqcl/channels.h"

namespace qkdqcl {

/// Multiplicative factors on the centered fidelities C_AB,Z, C_AB,X, C_AE,Z
/// and C_AE,X respectively.
struct NoiseScaling {
    double alpha = 1;
    double beta = 1;
    double gamma = 1;
    double delta = 1;

    bool balanced(double tol = 1e-12) const;
};

/// Scaling implied by a channel list. Before-attack channels scale Bob and
/// Eve, after-attack channels scale Bob only; factors multiply in order.
NoiseScaling predict_scaling(std::span<const NoiseChannel> noise);

struct FidelityPair {
    double f_ab;
    double f_ae;
};

struct CenteredFidelities {
    double c_ab_z;
    double c_ab_x;
    double c_ae_z;
    double c_ae_x;

    double c_ab() const { return (c_ab_z + c_ab_x) / 2; }
    double c_ae() const { return (c_ae_z + c_ae_x) / 2; }
};

CenteredFidelities centered(const FidelityReport &r);

// Phase-covariant cloner.

/// Line: RX(π/2), CRY(θ) onto Eve, CRY(-π) back from Eve, RX(-π/2). Eve:
/// RX(-π/2), then H in the X basis only, which V realizes as RZ(λ0), RY(λ1)
/// with (0, 0) for Z and (π, π/2) for X.
Scenario pccm_scenario(double theta, std::vector<NoiseChannel> noise = {});
/// The two-qubit attack unitary alone; `theta` may be a fixed angle or a
/// trainable slot.
ParamCircuit pccm_attack_circuit(Binding theta);
/// PCCM family with θ as the attack circuit's single trainable parameter.
Scenario pccm_family_scenario(std::vector<NoiseChannel> noise = {});

/// F_AB = (1 + cos(θ/2))/2, F_AE = (1 + sin(θ/2))/2.
FidelityPair pccm_fidelities(double theta);

/// Noise-free optimal tradeoff 1/2 + sqrt(F_AB (1 - F_AB)).
double pccm_curve(double f_ab);

/// Euclidean distance in the (F_AB, F_AE) plane to the curve above, the
/// upper half of the circle of radius 1/2 about (1/2, 1/2).
double pccm_curve_distance(double f_ab, double f_ae);

// Imbalanced cloner.

/// Line: RX(-π/2), CNOT, RX(π/2), CNOT. Eve: RX(-π/2), RZ(π), RZ(ψ), CNOT,
/// RZ(φ), CNOT, RX(-π/2), then RX(3π/2) in the X basis only.
Scenario imbalanced_scenario(double psi, double phi, std::vector<NoiseChannel> noise = {});

/// Closed form (α sin ψ, β cos φ, -γ sin φ, δ cos ψ).
CenteredFidelities imbalanced_centered(double psi, double phi, const NoiseScaling &scaling = {});

/// PCCM centered fidelities under the scaling model.
CenteredFidelities pccm_centered(double theta, const NoiseScaling &scaling = {});

/// φ = -arctan((αγ/βδ) cot ψ), the root of the Jacobian determinant of the
/// averaged centered fidelities. Throws std::domain_error when βδ = 0 or
/// sin ψ = 0.
double optimal_phi(double psi, const NoiseScaling &scaling);

/// Largest Eve centered fidelity in one basis for a given Bob centered
/// fidelity in that basis. Throws std::domain_error unless |c| < α (resp. β).
double envelope_z(const NoiseScaling &scaling, double c_ab_z);
double envelope_x(const NoiseScaling &scaling, double c_ab_x);

/// Best average Eve centered fidelity for the PCCM family at average Bob
/// centered fidelity `c_ab`, in [0, (α+β)/2].
double pccm_average_envelope(const NoiseScaling &scaling, double c_ab);

/// Same for the imbalanced cloner with φ = optimal_phi(ψ), solved for ψ in
/// (0, π/2] by bisection.
double imbalanced_average_envelope(const NoiseScaling &scaling, double c_ab);

/// One row of the theory-curve table, as fidelities (not centered).
struct TheoryPoint {
    double f_ab_z;
    double f_ae_z;
    double f_ab_x;
    double f_ae_x;
    double f_ab;
    double f_ae;
};

/// Sweeps ψ over (0, π/2) with the optimal φ; `n_points` ≥ 2.
std::vector<TheoryPoint> imbalanced_theory_sweep(const NoiseScaling &scaling, std::size_t n_points);

}  // namespace qkdqcl

#endif
