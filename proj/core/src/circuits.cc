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

#include "qkdqcl/circuits.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace qkdqcl {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 9> kGateNames{{
    {GateKind::RX, "RX"},
    {GateKind::RY, "RY"},
    {GateKind::RZ, "RZ"},
    {GateKind::H, "H"},
    {GateKind::X, "X"},
    {GateKind::Z, "Z"},
    {GateKind::S, "S"},
    {GateKind::CNOT, "CNOT"},
    {GateKind::CRY, "CRY"},
}};

ComplexMatrix single_qubit_unitary(GateKind kind, double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const Complex i{0, 1};
    const double r = 1 / std::sqrt(2.0);
    switch (kind) {
        case GateKind::RX:
            return {{c, -i * s}, {-i * s, c}};
        case GateKind::RY:
            return {{c, -s}, {s, c}};
        case GateKind::RZ:
            return {{std::exp(-i * (theta / 2)), 0}, {0, std::exp(i * (theta / 2))}};
        case GateKind::H:
            return {{r, r}, {r, -r}};
        case GateKind::X:
            return {{0, 1}, {1, 0}};
        case GateKind::Z:
            return {{1, 0}, {0, -1}};
        case GateKind::S:
            return {{1, 0}, {0, i}};
        default:
            throw std::logic_error("not a single-qubit gate");
    }
}

std::size_t qubit_bit(std::size_t n_qubits, std::size_t q) {
    return n_qubits - 1 - q;
}

}  // namespace

std::string_view gate_name(GateKind kind) {
    for (const auto &[k, name] : kGateNames) {
        if (k == kind) {
            return name;
        }
    }
    throw std::logic_error("unknown gate kind");
}

std::optional<GateKind> gate_from_name(std::string_view name) {
    for (const auto &[k, n] : kGateNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

bool is_parametrized(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ || kind == GateKind::CRY;
}

bool is_controlled(GateKind kind) {
    return kind == GateKind::CNOT || kind == GateKind::CRY;
}

std::optional<std::size_t> GateInstance::trainable_index() const {
    if (const auto *p = std::get_if<ParamIndex>(&param)) {
        return p->value;
    }
    return std::nullopt;
}

double GateInstance::angle(std::span<const double> params) const {
    if (const auto *a = std::get_if<double>(&param)) {
        return *a;
    }
    if (const auto *p = std::get_if<ParamIndex>(&param)) {
        if (p->value >= params.size()) {
            throw std::out_of_range("unbound trainable index " + std::to_string(p->value));
        }
        return params[p->value];
    }
    return 0;
}

void validate_gate(const GateInstance &g) {
    if (is_controlled(g.kind) != g.control.has_value()) {
        throw std::invalid_argument(std::string(gate_name(g.kind)) + ": control must be present iff gate is controlled");
    }
    if (g.control && *g.control == g.target) {
        throw std::invalid_argument("control and target must differ");
    }
    const bool has_angle = !std::holds_alternative<std::monostate>(g.param);
    if (is_parametrized(g.kind) != has_angle) {
        throw std::invalid_argument(std::string(gate_name(g.kind)) + ": angle binding mismatch");
    }
}

namespace gates {
namespace {
GateInstance checked(GateInstance g) {
    validate_gate(g);
    return g;
}
}  // namespace

GateInstance rx(std::size_t q, Binding angle) { return checked({GateKind::RX, q, std::nullopt, angle}); }
GateInstance ry(std::size_t q, Binding angle) { return checked({GateKind::RY, q, std::nullopt, angle}); }
GateInstance rz(std::size_t q, Binding angle) { return checked({GateKind::RZ, q, std::nullopt, angle}); }
GateInstance h(std::size_t q) { return {GateKind::H, q, std::nullopt, {}}; }
GateInstance x(std::size_t q) { return {GateKind::X, q, std::nullopt, {}}; }
GateInstance z(std::size_t q) { return {GateKind::Z, q, std::nullopt, {}}; }
GateInstance s(std::size_t q) { return {GateKind::S, q, std::nullopt, {}}; }
GateInstance cnot(std::size_t control, std::size_t target) { return checked({GateKind::CNOT, target, control, {}}); }
GateInstance cry(std::size_t control, std::size_t target, Binding angle) {
    return checked({GateKind::CRY, target, control, angle});
}
}  // namespace gates

ParamCircuit::ParamCircuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0 || n_qubits > 4) {
        throw std::invalid_argument("circuits support 1 to 4 qubits");
    }
}

ParamCircuit &ParamCircuit::add(GateInstance g) {
    validate_gate(g);
    if (g.target >= n_qubits_ || (g.control && *g.control >= n_qubits_)) {
        throw std::out_of_range("gate qubit index out of range");
    }
    gates_.push_back(g);
    return *this;
}

ParamCircuit &ParamCircuit::append(const ParamCircuit &other) {
    if (other.n_qubits_ != n_qubits_) {
        throw std::invalid_argument("cannot append circuits of different width");
    }
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

std::size_t ParamCircuit::n_params() const {
    std::size_t n = 0;
    for (const auto &g : gates_) {
        if (auto k = g.trainable_index()) {
            n = std::max(n, *k + 1);
        }
    }
    return n;
}

bool ParamCircuit::params_contiguous() const {
    std::vector<bool> seen(n_params(), false);
    for (const auto &g : gates_) {
        if (auto k = g.trainable_index()) {
            seen[*k] = true;
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

ComplexMatrix gate_unitary(const GateInstance &g, std::span<const double> params) {
    const double theta = g.angle(params);
    if (!is_controlled(g.kind)) {
        return single_qubit_unitary(g.kind, theta);
    }
    const ComplexMatrix u = g.kind == GateKind::CNOT ? single_qubit_unitary(GateKind::X, 0)
                                                     : single_qubit_unitary(GateKind::RY, theta);
    ComplexMatrix out = ComplexMatrix::identity(4);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            out(2 + r, 2 + c) = u(r, c);
        }
    }
    return out;
}

ComplexMatrix conjugate_on(const ComplexMatrix &rho, const ComplexMatrix &op, std::span<const std::size_t> qubits) {
    const std::size_t n = rho.n_qubits();
    const std::size_t k = qubits.size();
    if (op.dim() != (std::size_t{1} << k)) {
        throw std::invalid_argument("operator size does not match qubit list");
    }
    std::size_t mask = 0;
    std::vector<std::size_t> bits(k);
    for (std::size_t j = 0; j < k; ++j) {
        if (qubits[j] >= n) {
            throw std::out_of_range("qubit index out of range");
        }
        bits[j] = qubit_bit(n, qubits[j]);
        if (mask & (std::size_t{1} << bits[j])) {
            throw std::invalid_argument("repeated qubit in operator support");
        }
        mask |= std::size_t{1} << bits[j];
    }
    const std::size_t d = rho.dim();
    const std::size_t dk = op.dim();
    auto sub_index = [&](std::size_t i) {
        std::size_t s = 0;
        for (std::size_t j = 0; j < k; ++j) {
            s = (s << 1) | ((i >> bits[j]) & 1);
        }
        return s;
    };
    auto with_sub = [&](std::size_t i, std::size_t s) {
        i &= ~mask;
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t b = (s >> (k - 1 - j)) & 1;
            i |= b << bits[j];
        }
        return i;
    };

    // tmp = K ρ
    ComplexMatrix tmp(d);
    for (std::size_t r = 0; r < d; ++r) {
        const std::size_t sr = sub_index(r);
        for (std::size_t s = 0; s < dk; ++s) {
            const Complex kv = op(sr, s);
            if (kv == Complex{}) {
                continue;
            }
            const std::size_t src = with_sub(r, s);
            for (std::size_t c = 0; c < d; ++c) {
                tmp(r, c) += kv * rho(src, c);
            }
        }
    }
    // out = tmp K†
    ComplexMatrix out(d);
    for (std::size_t c = 0; c < d; ++c) {
        const std::size_t sc = sub_index(c);
        for (std::size_t s = 0; s < dk; ++s) {
            const Complex kv = std::conj(op(sc, s));
            if (kv == Complex{}) {
                continue;
            }
            const std::size_t src = with_sub(c, s);
            for (std::size_t r = 0; r < d; ++r) {
                out(r, c) += tmp(r, src) * kv;
            }
        }
    }
    return out;
}

DensityMatrix apply_gate(const DensityMatrix &rho, const GateInstance &g, std::span<const double> params) {
    const ComplexMatrix u = gate_unitary(g, params);
    if (g.control) {
        const std::array<std::size_t, 2> qs{*g.control, g.target};
        return DensityMatrix::assume_valid(conjugate_on(rho.matrix(), u, qs));
    }
    const std::array<std::size_t, 1> qs{g.target};
    return DensityMatrix::assume_valid(conjugate_on(rho.matrix(), u, qs));
}

DensityMatrix apply_circuit(const DensityMatrix &rho, const ParamCircuit &c, std::span<const double> params) {
    if (params.size() != c.n_params()) {
        throw std::invalid_argument("parameter vector length " + std::to_string(params.size()) +
                                    " does not match circuit (" + std::to_string(c.n_params()) + ")");
    }
    if (rho.n_qubits() != c.n_qubits()) {
        throw std::invalid_argument("state and circuit widths differ");
    }
    DensityMatrix out = rho;
    for (const auto &g : c.gates()) {
        out = apply_gate(out, g, params);
    }
    return out;
}

ParamCircuit build_hea(std::size_t n_qubits, std::size_t n_layers) {
    if (n_qubits == 0 || n_layers == 0) {
        throw std::invalid_argument("build_hea needs at least one qubit and one layer");
    }
    ParamCircuit c(n_qubits);
    std::size_t k = 0;
    for (std::size_t layer = 0; layer < n_layers; ++layer) {
        for (std::size_t q = 0; q < n_qubits; ++q) {
            c.add(gates::rx(q, ParamIndex{k++}));
            c.add(gates::ry(q, ParamIndex{k++}));
            c.add(gates::rz(q, ParamIndex{k++}));
        }
        if (n_qubits == 2) {
            c.add(gates::cnot(0, 1));
        } else if (n_qubits >= 3) {
            for (std::size_t q = 0; q < n_qubits; ++q) {
                c.add(gates::cnot(q, (q + 1) % n_qubits));
            }
        }
    }
    return c;
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep) {
    const std::size_t n = rho.n_qubits();
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set must be nonempty");
    }
    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw std::invalid_argument("partial_trace: repeated qubit");
    }
    if (kept.back() >= n) {
        throw std::out_of_range("partial_trace: qubit index out of range");
    }
    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) {
            traced.push_back(q);
        }
    }
    const std::size_t dk = std::size_t{1} << kept.size();
    const std::size_t dt = std::size_t{1} << traced.size();
    auto compose = [&](std::size_t ki, std::size_t ti) {
        std::size_t i = 0;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            i |= ((ki >> (kept.size() - 1 - j)) & 1) << qubit_bit(n, kept[j]);
        }
        for (std::size_t j = 0; j < traced.size(); ++j) {
            i |= ((ti >> (traced.size() - 1 - j)) & 1) << qubit_bit(n, traced[j]);
        }
        return i;
    };
    ComplexMatrix out(dk);
    for (std::size_t r = 0; r < dk; ++r) {
        for (std::size_t c = 0; c < dk; ++c) {
            Complex s = 0;
            for (std::size_t t = 0; t < dt; ++t) {
                s += rho(compose(r, t), compose(c, t));
            }
            out(r, c) = s;
        }
    }
    return DensityMatrix::assume_valid(std::move(out));
}

double z_probability(const DensityMatrix &rho, std::size_t qubit, int bit) {
    const std::size_t n = rho.n_qubits();
    if (qubit >= n) {
        throw std::out_of_range("z_probability: qubit index out of range");
    }
    const std::size_t b = qubit_bit(n, qubit);
    double p = 0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        if (static_cast<int>((i >> b) & 1) == bit) {
            p += rho(i, i).real();
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

std::string circuit_to_json(const ParamCircuit &c) {
    nlohmann::json gates_json = nlohmann::json::array();
    for (const auto &g : c.gates()) {
        nlohmann::json j;
        j["kind"] = gate_name(g.kind);
        j["target"] = g.target;
        if (g.control) {
            j["control"] = *g.control;
        }
        if (const auto *a = std::get_if<double>(&g.param)) {
            j["angle"] = *a;
        } else if (const auto *p = std::get_if<ParamIndex>(&g.param)) {
            j["param"] = p->value;
        }
        gates_json.push_back(std::move(j));
    }
    nlohmann::json root;
    root["n_qubits"] = c.n_qubits();
    root["n_params"] = c.n_params();
    root["gates"] = std::move(gates_json);
    return root.dump(2);
}

ParamCircuit circuit_from_json(std::string_view text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("circuit manifest: ") + e.what());
    }
    try {
        ParamCircuit c(root.at("n_qubits").get<std::size_t>());
        for (const auto &j : root.at("gates")) {
            const auto name = j.at("kind").get<std::string>();
            const auto kind = gate_from_name(name);
            if (!kind) {
                throw std::invalid_argument("circuit manifest: unknown gate '" + name + "'");
            }
            GateInstance g{*kind, j.at("target").get<std::size_t>(), std::nullopt, {}};
            if (j.contains("control")) {
                g.control = j.at("control").get<std::size_t>();
            }
            if (j.contains("angle")) {
                g.param = j.at("angle").get<double>();
            } else if (j.contains("param")) {
                g.param = ParamIndex{j.at("param").get<std::size_t>()};
            }
            c.add(g);
        }
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("circuit manifest: ") + e.what());
    }
}

}  // namespace qkdqcl
