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

#include "qkdqcl/attacks.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qkdqcl {

namespace {

constexpr double kPi = std::numbers::pi;

std::map<WeightKey, std::vector<double>> basis_weights(std::vector<double> z, std::vector<double> x) {
    return {{WeightKey{Basis::Z, std::nullopt}, std::move(z)}, {WeightKey{Basis::X, std::nullopt}, std::move(x)}};
}

}  // namespace

bool NoiseScaling::balanced(double tol) const {
    return std::abs(alpha * gamma - beta * delta) <= tol;
}

NoiseScaling predict_scaling(std::span<const NoiseChannel> noise) {
    NoiseScaling s;
    for (const auto &ch : noise) {
        const double z = basis_scaling(ch, Basis::Z);
        const double x = basis_scaling(ch, Basis::X);
        s.alpha *= z;
        s.beta *= x;
        if (ch.placement == Placement::BeforeAttack) {
            s.gamma *= z;
            s.delta *= x;
        }
    }
    return s;
}

CenteredFidelities centered(const FidelityReport &r) {
    return {r.c_ab_z(), r.c_ab_x(), r.c_ae_z(), r.c_ae_x()};
}

ParamCircuit pccm_attack_circuit(Binding theta) {
    ParamCircuit u(2);
    u.add(gates::rx(0, kPi / 2));
    u.add(gates::cry(0, 1, theta));
    u.add(gates::cry(1, 0, -kPi));
    u.add(gates::rx(0, -kPi / 2));
    u.add(gates::rx(1, -kPi / 2));
    return u;
}

namespace {

Scenario pccm_with_attack(ParamCircuit attack, std::vector<NoiseChannel> noise) {
    // H = i·RY(π/2)·RZ(π), so the delayed H is V(π, π/2) and V(0, 0) = I.
    ParamCircuit v(1);
    v.add(gates::rz(0, ParamIndex{0}));
    v.add(gates::ry(0, ParamIndex{1}));
    return Scenario{1, std::move(attack), std::move(v), basis_weights({0.0, 0.0}, {kPi, kPi / 2}), std::move(noise)};
}

}  // namespace

Scenario pccm_scenario(double theta, std::vector<NoiseChannel> noise) {
    return pccm_with_attack(pccm_attack_circuit(theta), std::move(noise));
}

Scenario pccm_family_scenario(std::vector<NoiseChannel> noise) {
    return pccm_with_attack(pccm_attack_circuit(ParamIndex{0}), std::move(noise));
}

FidelityPair pccm_fidelities(double theta) {
    return {(1 + std::cos(theta / 2)) / 2, (1 + std::sin(theta / 2)) / 2};
}

double pccm_curve(double f_ab) {
    return 0.5 + std::sqrt(std::max(0.0, f_ab * (1 - f_ab)));
}

double pccm_curve_distance(double f_ab, double f_ae) {
    const double dx = f_ab - 0.5;
    const double dy = f_ae - 0.5;
    if (dy >= 0) {
        return std::abs(std::hypot(dx, dy) - 0.5);
    }
    // Below the diameter the nearest point is an endpoint.
    return std::min(std::hypot(f_ab, dy), std::hypot(f_ab - 1, dy));
}

Scenario imbalanced_scenario(double psi, double phi, std::vector<NoiseChannel> noise) {
    ParamCircuit u(2);
    u.add(gates::rx(0, -kPi / 2));
    u.add(gates::rx(1, -kPi / 2));
    u.add(gates::rz(1, kPi));
    u.add(gates::rz(1, psi));
    u.add(gates::cnot(0, 1));
    u.add(gates::rz(1, phi));
    u.add(gates::rx(0, kPi / 2));
    u.add(gates::cnot(0, 1));
    u.add(gates::rx(1, -kPi / 2));
    ParamCircuit v(1);
    v.add(gates::rx(0, ParamIndex{0}));
    return Scenario{1, std::move(u), std::move(v), basis_weights({0.0}, {3 * kPi / 2}), std::move(noise)};
}

CenteredFidelities imbalanced_centered(double psi, double phi, const NoiseScaling &s) {
    return {s.alpha * std::sin(psi), s.beta * std::cos(phi), -s.gamma * std::sin(phi), s.delta * std::cos(psi)};
}

CenteredFidelities pccm_centered(double theta, const NoiseScaling &s) {
    const double c = std::cos(theta / 2);
    const double e = std::sin(theta / 2);
    return {s.alpha * c, s.beta * c, s.gamma * e, s.delta * e};
}

double optimal_phi(double psi, const NoiseScaling &s) {
    const double bd = s.beta * s.delta;
    const double sp = std::sin(psi);
    if (bd == 0) {
        throw std::domain_error("optimal_phi: beta*delta must be nonzero");
    }
    if (std::abs(sp) < 1e-300) {
        throw std::domain_error("optimal_phi: sin(psi) must be nonzero");
    }
    return -std::atan((s.alpha * s.gamma / bd) * (std::cos(psi) / sp));
}

namespace {

double envelope_impl(double scale, double eve_scale, double ratio, double c) {
    if (!(std::abs(c) < scale)) {
        throw std::domain_error("envelope: |C_AB| must be below its noise scale");
    }
    const double c2 = c * c;
    return eve_scale / std::sqrt(1 + ratio * ratio * c2 / (scale * scale - c2));
}

}  // namespace

double envelope_z(const NoiseScaling &s, double c_ab_z) {
    if (s.alpha * s.gamma == 0) {
        throw std::domain_error("envelope_z: alpha*gamma must be nonzero");
    }
    return envelope_impl(s.alpha, s.gamma, (s.beta * s.delta) / (s.alpha * s.gamma), c_ab_z);
}

double envelope_x(const NoiseScaling &s, double c_ab_x) {
    if (s.beta * s.delta == 0) {
        throw std::domain_error("envelope_x: beta*delta must be nonzero");
    }
    return envelope_impl(s.beta, s.delta, (s.alpha * s.gamma) / (s.beta * s.delta), c_ab_x);
}

double pccm_average_envelope(const NoiseScaling &s, double c_ab) {
    const double bob_scale = (s.alpha + s.beta) / 2;
    if (c_ab < 0 || c_ab > bob_scale) {
        throw std::domain_error("pccm_average_envelope: target outside the PCCM range");
    }
    const double c = bob_scale == 0 ? 0 : c_ab / bob_scale;
    return (s.gamma + s.delta) / 2 * std::sqrt(std::max(0.0, 1 - c * c));
}

double imbalanced_average_envelope(const NoiseScaling &s, double c_ab) {
    auto bob_at = [&](double psi) { return imbalanced_centered(psi, optimal_phi(psi, s), s).c_ab(); };
    double lo = 1e-12;
    double hi = kPi / 2;
    if (c_ab < bob_at(lo) - 1e-12 || c_ab > bob_at(hi) + 1e-12) {
        throw std::domain_error("imbalanced_average_envelope: target outside the reachable range");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bob_at(mid) < c_ab ? lo : hi) = mid;
    }
    const double psi = 0.5 * (lo + hi);
    return imbalanced_centered(psi, optimal_phi(psi, s), s).c_ae();
}

std::vector<TheoryPoint> imbalanced_theory_sweep(const NoiseScaling &s, std::size_t n_points) {
    if (n_points < 2) {
        throw std::invalid_argument("theory sweep needs at least two points");
    }
    std::vector<TheoryPoint> out;
    out.reserve(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double psi = (kPi / 2) * static_cast<double>(k + 1) / static_cast<double>(n_points);
        const auto c = imbalanced_centered(psi, optimal_phi(psi, s), s);
        auto f = [](double cc) { return (1 + cc) / 2; };
        out.push_back({f(c.c_ab_z), f(c.c_ae_z), f(c.c_ab_x), f(c.c_ae_x), f(c.c_ab()), f(c.c_ae())});
    }
    return out;
}

}  // namespace qkdqcl
