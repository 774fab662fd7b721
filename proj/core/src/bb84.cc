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

#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qkdqcl {

std::string weight_key_name(const WeightKey &key) {
    std::string out(basis_name(key.basis));
    if (key.parity) {
        out += *key.parity == 0 ? "/even" : "/odd";
    }
    return out;
}

void validate_scenario(const Scenario &s) {
    if (s.n_ancilla == 0 || s.n_ancilla > 3) {
        throw std::invalid_argument("scenario: Eve's register must hold 1 to 3 qubits");
    }
    if (s.attack.n_qubits() != 1 + s.n_ancilla) {
        throw std::invalid_argument("scenario: attack circuit must span line + register");
    }
    if (s.measure.n_qubits() != s.n_ancilla) {
        throw std::invalid_argument("scenario: measurement circuit must span the register");
    }
    for (const auto &[key, w] : s.v_weights) {
        if (w.size() != s.measure.n_params()) {
            throw std::invalid_argument("scenario: weight set " + weight_key_name(key) + " has " +
                                        std::to_string(w.size()) + " entries, V needs " +
                                        std::to_string(s.measure.n_params()));
        }
    }
    for (const auto &ch : s.noise) {
        if (ch.target != 0) {
            throw std::invalid_argument("scenario: channel noise acts on the line qubit only");
        }
    }
}

PureState prepare_state(int x, Basis basis) {
    if (x != 0 && x != 1) {
        throw std::invalid_argument("key bit must be 0 or 1");
    }
    if (basis == Basis::Z) {
        return PureState::basis(2, static_cast<std::size_t>(x));
    }
    const double r = 1 / std::sqrt(2.0);
    return PureState({r, x == 0 ? r : -r});
}

DensityMatrix attacked_state(const Scenario &s, std::span<const double> theta, int x, Basis basis) {
    PureState psi = prepare_state(x, basis);
    for (std::size_t k = 0; k < s.n_ancilla; ++k) {
        psi = tensor_product(psi, PureState::basis(2, 0));
    }
    DensityMatrix rho = DensityMatrix::from_pure(psi);
    for (const auto &ch : s.noise) {
        if (ch.placement == Placement::BeforeAttack) {
            rho = apply_channel(rho, ch);
        }
    }
    rho = apply_circuit(rho, s.attack, theta);
    for (const auto &ch : s.noise) {
        if (ch.placement == Placement::AfterAttack) {
            rho = apply_channel(rho, ch);
        }
    }
    return rho;
}

double bob_probability(const DensityMatrix &joint, Basis basis, int outcome) {
    const std::array<std::size_t, 1> line{0};
    return fidelity_pure(prepare_state(outcome, basis), partial_trace(joint, line));
}

double eve_probability(const Scenario &s, const DensityMatrix &joint, const WeightKey &key, int outcome) {
    const auto it = s.v_weights.find(key);
    if (it == s.v_weights.end()) {
        throw std::invalid_argument("scenario: no weight set for key " + weight_key_name(key));
    }
    std::vector<std::size_t> reg(s.n_ancilla);
    std::iota(reg.begin(), reg.end(), std::size_t{1});
    const DensityMatrix eve = apply_circuit(partial_trace(joint, reg), s.measure, it->second);
    return z_probability(eve, 0, outcome);
}

FidelityReport evaluate_scenario(const Scenario &s, std::span<const double> theta) {
    validate_scenario(s);
    if (theta.size() != s.attack.n_params()) {
        throw std::invalid_argument("theta length does not match the attack circuit");
    }
    FidelityReport r;
    for (Basis b : kBases) {
        double fab = 0;
        double fae = 0;
        for (int x = 0; x < 2; ++x) {
            const DensityMatrix joint = attacked_state(s, theta, x, b);
            fab += bob_probability(joint, b, x);
            fae += eve_probability(s, joint, WeightKey{b, std::nullopt}, x);
        }
        if (b == Basis::Z) {
            r.f_ab_z = fab / 2;
            r.f_ae_z = fae / 2;
        } else {
            r.f_ab_x = fab / 2;
            r.f_ae_x = fae / 2;
        }
    }
    r.f_ab = (r.f_ab_z + r.f_ab_x) / 2;
    r.f_ae = (r.f_ae_z + r.f_ae_x) / 2;
    r.qber = 1 - r.f_ab;
    return r;
}

std::size_t n_flat_params(const Scenario &s) {
    return s.attack.n_params() + s.v_weights.size() * s.measure.n_params();
}

std::vector<double> flatten_params(const Scenario &s, std::span<const double> theta) {
    std::vector<double> flat(theta.begin(), theta.end());
    for (const auto &[key, w] : s.v_weights) {
        flat.insert(flat.end(), w.begin(), w.end());
    }
    return flat;
}

std::vector<double> unflatten_params(Scenario &s, std::span<const double> flat) {
    if (flat.size() != n_flat_params(s)) {
        throw std::invalid_argument("flat parameter vector has wrong length");
    }
    const std::size_t nu = s.attack.n_params();
    const std::size_t nv = s.measure.n_params();
    std::size_t off = nu;
    for (auto &[key, w] : s.v_weights) {
        w.assign(flat.begin() + static_cast<std::ptrdiff_t>(off), flat.begin() + static_cast<std::ptrdiff_t>(off + nv));
        off += nv;
    }
    return {flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(nu)};
}

FidelityReport evaluate_flat(const Scenario &s, std::span<const double> flat) {
    Scenario local = s;
    const auto theta = unflatten_params(local, flat);
    return evaluate_scenario(local, theta);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over the (seed, index) pair.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

ProtocolSample monte_carlo_protocol(const Scenario &s, std::span<const double> theta, std::size_t n_rounds,
                                    std::uint64_t seed) {
    validate_scenario(s);
    if (n_rounds == 0) {
        throw std::invalid_argument("monte_carlo_protocol needs at least one round");
    }
    // Outcome probabilities for the eight (x, b_A, b_B) configurations.
    std::array<double, 8> p_bob_one{};
    std::array<double, 4> p_eve_one{};
    for (int x = 0; x < 2; ++x) {
        for (Basis ba : kBases) {
            const DensityMatrix joint = attacked_state(s, theta, x, ba);
            const int ia = static_cast<int>(ba);
            for (Basis bb : kBases) {
                p_bob_one[static_cast<std::size_t>(x * 4 + ia * 2 + static_cast<int>(bb))] =
                    bob_probability(joint, bb, 1);
            }
            p_eve_one[static_cast<std::size_t>(x * 2 + ia)] = eve_probability(s, joint, WeightKey{ba, std::nullopt}, 1);
        }
    }

    ProtocolSample out;
    out.n_rounds = n_rounds;
    out.seed = seed;
    std::size_t errors = 0;
    std::size_t eve_hits = 0;
    for (std::size_t round = 0; round < n_rounds; ++round) {
        std::mt19937_64 rng(derive_seed(seed, round));
        std::uniform_int_distribution<int> bit(0, 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Transmission t{};
        t.x = bit(rng);
        t.b_a = static_cast<Basis>(bit(rng));
        t.b_b = static_cast<Basis>(bit(rng));
        const int ia = static_cast<int>(t.b_a);
        const double pb = p_bob_one[static_cast<std::size_t>(t.x * 4 + ia * 2 + static_cast<int>(t.b_b))];
        const int bob = u(rng) < pb ? 1 : 0;
        if (!t.sifted()) {
            continue;
        }
        t.b_e = t.b_a;
        const int eve = u(rng) < p_eve_one[static_cast<std::size_t>(t.x * 2 + ia)] ? 1 : 0;
        ++out.n_sifted;
        errors += bob != t.x ? 1 : 0;
        eve_hits += eve == t.x ? 1 : 0;
    }
    if (out.n_sifted > 0) {
        out.qber_hat = static_cast<double>(errors) / static_cast<double>(out.n_sifted);
        out.eve_match_hat = static_cast<double>(eve_hits) / static_cast<double>(out.n_sifted);
    }
    return out;
}

}  // namespace qkdqcl
