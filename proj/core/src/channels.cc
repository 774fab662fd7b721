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

#include "qkdqcl/channels.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qkdqcl/circuits.h"

namespace qkdqcl {

namespace {

constexpr std::array<std::pair<NoiseKind, std::string_view>, 4> kKindNames{{
    {NoiseKind::BitFlip, "bit_flip"},
    {NoiseKind::PhaseFlip, "phase_flip"},
    {NoiseKind::AmplitudeDamping, "amplitude_damping"},
    {NoiseKind::PhaseDamping, "phase_damping"},
}};

PureState basis_state(Basis b, int bit) {
    const double r = 1 / std::sqrt(2.0);
    if (b == Basis::Z) {
        return PureState::basis(2, static_cast<std::size_t>(bit));
    }
    return PureState({r, bit == 0 ? r : -r});
}

}  // namespace

std::string_view noise_kind_name(NoiseKind kind) {
    for (const auto &[k, n] : kKindNames) {
        if (k == kind) {
            return n;
        }
    }
    throw std::logic_error("unknown noise kind");
}

std::optional<NoiseKind> noise_kind_from_name(std::string_view name) {
    for (const auto &[k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::string_view placement_name(Placement p) {
    return p == Placement::BeforeAttack ? "before" : "after";
}

std::optional<Placement> placement_from_name(std::string_view name) {
    if (name == "before") {
        return Placement::BeforeAttack;
    }
    if (name == "after") {
        return Placement::AfterAttack;
    }
    return std::nullopt;
}

std::vector<ComplexMatrix> kraus_ops(const NoiseChannel &ch) {
    const double p = ch.strength;
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("noise strength must lie in [0, 1], got " + std::to_string(p));
    }
    const double keep = std::sqrt(1 - p);
    const double hit = std::sqrt(p);
    switch (ch.kind) {
        case NoiseKind::BitFlip:
            return {ComplexMatrix{{keep, 0}, {0, keep}}, ComplexMatrix{{0, hit}, {hit, 0}}};
        case NoiseKind::PhaseFlip:
            return {ComplexMatrix{{keep, 0}, {0, keep}}, ComplexMatrix{{hit, 0}, {0, -hit}}};
        case NoiseKind::AmplitudeDamping:
            return {ComplexMatrix{{1, 0}, {0, keep}}, ComplexMatrix{{0, hit}, {0, 0}}};
        case NoiseKind::PhaseDamping:
            return {ComplexMatrix{{1, 0}, {0, keep}}, ComplexMatrix{{0, 0}, {0, hit}}};
    }
    throw std::logic_error("unknown noise kind");
}

DensityMatrix apply_channel(const DensityMatrix &rho, const NoiseChannel &ch) {
    if (ch.target >= rho.n_qubits()) {
        throw std::out_of_range("noise target qubit out of range");
    }
    const std::array<std::size_t, 1> qs{ch.target};
    ComplexMatrix out(rho.dim());
    for (const auto &k : kraus_ops(ch)) {
        out += conjugate_on(rho.matrix(), k, qs);
    }
    return DensityMatrix::assume_valid(std::move(out));
}

double basis_scaling(const NoiseChannel &ch, Basis basis) {
    NoiseChannel local = ch;
    local.target = 0;
    double s = 0;
    for (int bit = 0; bit < 2; ++bit) {
        const PureState psi = basis_state(basis, bit);
        const DensityMatrix out = apply_channel(DensityMatrix::from_pure(psi), local);
        s += 2 * fidelity_pure(psi, out) - 1;
    }
    return s / 2;
}

}  // namespace qkdqcl
