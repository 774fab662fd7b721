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

#ifndef QKDQCL_CIRCUITS_H
#define QKDQCL_CIRCUITS_H

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qkdqcl/qmat.h"

namespace qkdqcl {

/// Rotations use the exp(-iθP/2) convention, so the two-term parameter-shift
/// rule with shift π/2 is exact for RX/RY/RZ.
enum class GateKind { RX, RY, RZ, H, X, Z, S, CNOT, CRY };

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(std::string_view name);

bool is_parametrized(GateKind kind);
bool is_controlled(GateKind kind);

/// Index into a circuit's parameter vector.
struct ParamIndex {
    std::size_t value;
    bool operator==(const ParamIndex &) const = default;
};

/// No parameter (fixed gates), a fixed angle in radians, or a trainable slot.
using Binding = std::variant<std::monostate, double, ParamIndex>;

struct GateInstance {
    GateKind kind;
    std::size_t target;
    std::optional<std::size_t> control;
    Binding param;

    bool operator==(const GateInstance &) const = default;

    std::optional<std::size_t> trainable_index() const;
    /// Resolves the gate's rotation angle against a parameter vector.
    double angle(std::span<const double> params) const;
};

/// Constructors that enforce the GateInstance invariants.
namespace gates {
GateInstance rx(std::size_t q, Binding angle);
GateInstance ry(std::size_t q, Binding angle);
GateInstance rz(std::size_t q, Binding angle);
GateInstance h(std::size_t q);
GateInstance x(std::size_t q);
GateInstance z(std::size_t q);
GateInstance s(std::size_t q);
GateInstance cnot(std::size_t control, std::size_t target);
GateInstance cry(std::size_t control, std::size_t target, Binding angle);
}  // namespace gates

/// Throws std::invalid_argument if `g` breaks the control/binding rules.
void validate_gate(const GateInstance &g);

/// Ordered gate list over at most 4 qubits.
class ParamCircuit {
   public:
    explicit ParamCircuit(std::size_t n_qubits);

    ParamCircuit &add(GateInstance g);
    /// Appends every gate of `other`; parameter indices are kept as is.
    ParamCircuit &append(const ParamCircuit &other);

    std::size_t n_qubits() const { return n_qubits_; }
    /// One past the largest trainable index in use.
    std::size_t n_params() const;
    std::span<const GateInstance> gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    /// Every index in [0, n_params) is bound by at least one gate.
    bool params_contiguous() const;

    bool operator==(const ParamCircuit &) const = default;

   private:
    std::size_t n_qubits_;
    std::vector<GateInstance> gates_;
};

/// 2×2 unitary, or 4×4 with the control on the more significant bit.
ComplexMatrix gate_unitary(const GateInstance &g, std::span<const double> params);

/// K ρ K† for a (possibly non-unitary) operator acting on `qubits` in order;
/// qubits[0] is the operator's most significant bit.
ComplexMatrix conjugate_on(const ComplexMatrix &rho, const ComplexMatrix &op, std::span<const std::size_t> qubits);

DensityMatrix apply_gate(const DensityMatrix &rho, const GateInstance &g, std::span<const double> params);
DensityMatrix apply_circuit(const DensityMatrix &rho, const ParamCircuit &c, std::span<const double> params);

/// Layers of RX, RY, RZ on every qubit followed by CNOT entanglers: a single
/// CNOT(0→1) for two qubits, the ring 0→1→…→n-1→0 for three or more.
ParamCircuit build_hea(std::size_t n_qubits, std::size_t n_layers);

/// Reduced state on `keep` (kept qubits stay in ascending order).
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep);

/// Probability that measuring `qubit` in the Z basis yields `bit`.
double z_probability(const DensityMatrix &rho, std::size_t qubit, int bit);

std::string circuit_to_json(const ParamCircuit &c);
ParamCircuit circuit_from_json(std::string_view text);

}  // namespace qkdqcl

#endif
