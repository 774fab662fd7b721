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

#ifndef QKDQCL_CHANNELS_H
#define QKDQCL_CHANNELS_H

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qkdqcl/basis.h"
#include "qkdqcl/qmat.h"

namespace qkdqcl {

enum class NoiseKind { BitFlip, PhaseFlip, AmplitudeDamping, PhaseDamping };

/// Where a channel sits on the line relative to Eve's interaction.
/// BeforeAttack: between Alice and Eve. AfterAttack: between Eve and Bob.
enum class Placement { BeforeAttack, AfterAttack };

struct NoiseChannel {
    NoiseKind kind;
    double strength;  ///< p in [0, 1]
    std::size_t target = 0;
    Placement placement = Placement::BeforeAttack;

    bool operator==(const NoiseChannel &) const = default;
};

std::string_view noise_kind_name(NoiseKind kind);
std::optional<NoiseKind> noise_kind_from_name(std::string_view name);
std::string_view placement_name(Placement p);
std::optional<Placement> placement_from_name(std::string_view name);

/// Single-qubit Kraus operators. Throws std::invalid_argument for p outside [0, 1].
std::vector<ComplexMatrix> kraus_ops(const NoiseChannel &ch);

/// Σ K ρ K† with every K acting on `ch.target`.
DensityMatrix apply_channel(const DensityMatrix &rho, const NoiseChannel &ch);

/// Mean over the basis states ψ of 2⟨ψ|E(|ψ⟩⟨ψ|)|ψ⟩ - 1. This is the exact
/// factor on centered fidelities for Pauli channels; for the damping channels
/// the true map is affine and this number is only a summary.
double basis_scaling(const NoiseChannel &ch, Basis basis);

}  // namespace qkdqcl

#endif
