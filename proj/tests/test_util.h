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

#ifndef QKDQCL_TESTS_TEST_UTIL_H
#define QKDQCL_TESTS_TEST_UTIL_H

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qkdqcl/bb84.h"
#include "qkdqcl/circuits.h"
#include "qkdqcl/qmat.h"

namespace qkdqcl::testing {

inline constexpr double kPi = std::numbers::pi;

inline std::mt19937_64 &shared_rng() {
    static std::mt19937_64 rng(0xC0FFEE);
    return rng;
}

inline ComplexMatrix random_matrix(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0, 1);
    ComplexMatrix m(dim);
    for (auto &z : m.entries()) {
        z = {n(rng), n(rng)};
    }
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64 &rng) {
    const ComplexMatrix a = random_matrix(dim, rng);
    return (a + a.adjoint()) * Complex(0.5);
}

/// A A† / Tr(A A†) with A optionally rank-deficient.
inline DensityMatrix random_density(std::size_t dim, std::mt19937_64 &rng, std::size_t rank = 0) {
    ComplexMatrix a = random_matrix(dim, rng);
    if (rank > 0) {
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = rank; c < dim; ++c) {
                a(r, c) = 0;
            }
        }
    }
    ComplexMatrix p = a * a.adjoint();
    p *= Complex(1.0 / p.trace().real());
    return DensityMatrix(p);
}

inline PureState random_pure(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0, 1);
    std::vector<Complex> v(dim);
    double s = 0;
    for (auto &z : v) {
        z = {n(rng), n(rng)};
        s += std::norm(z);
    }
    for (auto &z : v) {
        z /= std::sqrt(s);
    }
    return PureState(std::move(v));
}

/// Random gate list over `n` qubits drawing from every gate kind. Trainable
/// gates bind indices in [0, n_params) and every index is used at least once;
/// `allow_shared` lets later gates reuse earlier indices.
inline ParamCircuit random_circuit(std::size_t n, std::size_t n_gates, std::size_t n_params, std::mt19937_64 &rng,
                                   bool allow_shared = true, bool allow_cry = true) {
    std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_int_distribution<int> kind_pick(0, 8);
    ParamCircuit c(n);
    std::size_t next = 0;
    auto binding = [&]() -> Binding {
        if (next < n_params) {
            return ParamIndex{next++};
        }
        if (allow_shared && n_params > 0 && rng() % 2 == 0) {
            return ParamIndex{static_cast<std::size_t>(rng() % n_params)};
        }
        return angle(rng);
    };
    while (c.size() < n_gates || next < n_params) {
        int k = kind_pick(rng);
        if (n == 1 && (k == 7 || k == 8)) {
            k = 0;
        }
        if (!allow_cry && k == 8) {
            k = 1;
        }
        const std::size_t t = qubit(rng);
        std::size_t ctl = qubit(rng);
        while (n > 1 && ctl == t) {
            ctl = qubit(rng);
        }
        switch (k) {
            case 0: c.add(gates::rx(t, binding())); break;
            case 1: c.add(gates::ry(t, binding())); break;
            case 2: c.add(gates::rz(t, binding())); break;
            case 3: c.add(gates::h(t)); break;
            case 4: c.add(gates::x(t)); break;
            case 5: c.add(gates::z(t)); break;
            case 6: c.add(gates::s(t)); break;
            case 7: c.add(gates::cnot(ctl, t)); break;
            default: c.add(gates::cry(ctl, t, binding())); break;
        }
    }
    return c;
}

inline std::vector<double> random_angles(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::vector<double> v(n);
    for (auto &x : v) {
        x = angle(rng);
    }
    return v;
}

/// Random individual-attack scenario with basis-keyed V weights.
inline Scenario random_scenario(std::mt19937_64 &rng, std::size_t n_ancilla = 1) {
    ParamCircuit u = random_circuit(1 + n_ancilla, 8, 4, rng);
    ParamCircuit v = random_circuit(n_ancilla, 3, 2, rng);
    const std::size_t nv = v.n_params();
    std::map<WeightKey, std::vector<double>> w{{WeightKey{Basis::Z, std::nullopt}, random_angles(nv, rng)},
                                               {WeightKey{Basis::X, std::nullopt}, random_angles(nv, rng)}};
    return Scenario{n_ancilla, std::move(u), std::move(v), std::move(w), {}};
}

/// Finite-difference oracle on the flat parameter vector.
inline std::pair<double, double> central_difference(const Scenario &s, std::vector<double> flat, std::size_t k,
                                                    double h) {
    const double x0 = flat[k];
    flat[k] = x0 + h;
    const auto plus = evaluate_flat(s, flat);
    flat[k] = x0 - h;
    const auto minus = evaluate_flat(s, flat);
    return {(plus.f_ab - minus.f_ab) / (2 * h), (plus.f_ae - minus.f_ae) / (2 * h)};
}

}  // namespace qkdqcl::testing

#endif
