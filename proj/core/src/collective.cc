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

#include "qkdqcl/collective.h"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qkdqcl/attacks.h"
#include "qkdqcl/bb84.h"

namespace qkdqcl {

double solve_pccm_theta(double f_ab) {
    if (!(f_ab >= 0.5 && f_ab <= 1.0)) {
        throw std::domain_error("solve_pccm_theta: F_AB must lie in [0.5, 1]");
    }
    // F_AB(θ) decreases monotonically on [0, π].
    double lo = 0;
    double hi = std::numbers::pi;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (pccm_fidelities(mid).f_ab > f_ab ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

DensityMatrix eve_aligned_copy(int x, Basis basis, double theta) {
    const Scenario s = pccm_scenario(theta);
    const std::array<double, 0> none{};
    const DensityMatrix joint = attacked_state(s, none, x, basis);
    const std::array<std::size_t, 1> eve{1};
    DensityMatrix rho = partial_trace(joint, eve);
    ParamCircuit align(1);
    if (basis == Basis::Z) {
        align.add(gates::s(0)).add(gates::z(0));
    } else {
        align.add(gates::h(0)).add(gates::s(0));
    }
    return apply_circuit(rho, align, none);
}

IndividualBaseline individual_baseline(double f_ae) {
    if (!(f_ae >= 0 && f_ae <= 1)) {
        throw std::domain_error("individual_baseline: F_AE must lie in [0, 1]");
    }
    return {f_ae * f_ae, f_ae * f_ae + f_ae * (1 - f_ae)};
}

std::string_view readout_name(CollectiveReadout r) {
    return r == CollectiveReadout::ExactPair ? "exact_pair" : "parity_decoded";
}

std::optional<CollectiveReadout> readout_from_name(std::string_view name) {
    if (name == "exact_pair") {
        return CollectiveReadout::ExactPair;
    }
    if (name == "parity_decoded") {
        return CollectiveReadout::ParityDecoded;
    }
    return std::nullopt;
}

std::vector<std::pair<int, int>> parity_pairs(int parity) {
    if (parity == 0) {
        return {{0, 0}, {1, 1}};
    }
    if (parity == 1) {
        return {{0, 1}, {1, 0}};
    }
    throw std::invalid_argument("parity must be 0 or 1");
}

namespace {

struct Copies {
    DensityMatrix zero;
    DensityMatrix one;

    const DensityMatrix &of(int x) const { return x == 0 ? zero : one; }
};

Copies aligned_copies(const CollectiveConfig &cfg) {
    const double theta = cfg.theta();
    return {eve_aligned_copy(0, Basis::Z, theta), eve_aligned_copy(1, Basis::Z, theta)};
}

double success_with(const Copies &copies, const ParamCircuit &v, CollectiveReadout readout, int parity,
                    std::span<const double> lambda) {
    double s = 0;
    const auto pairs = parity_pairs(parity);
    for (const auto &[a, b] : pairs) {
        const DensityMatrix out = apply_circuit(tensor_product(copies.of(a), copies.of(b)), v, lambda);
        if (readout == CollectiveReadout::ExactPair) {
            const auto idx = static_cast<std::size_t>(a * 2 + b);
            s += out(idx, idx).real();
        } else {
            s += z_probability(out, 0, a);
        }
    }
    return s / static_cast<double>(pairs.size());
}

}  // namespace

double collective_success(const CollectiveConfig &cfg, int parity, std::span<const double> lambda) {
    const ParamCircuit v = cfg.measure_circuit();
    if (lambda.size() != v.n_params()) {
        throw std::invalid_argument("collective_success: expected " + std::to_string(v.n_params()) + " weights");
    }
    return success_with(aligned_copies(cfg), v, cfg.readout, parity, lambda);
}

double helstrom_bound(const DensityMatrix &rho_a, const DensityMatrix &rho_b) {
    if (rho_a.dim() != rho_b.dim()) {
        throw std::invalid_argument("helstrom_bound: dimension mismatch");
    }
    return 0.5 + 0.25 * trace_norm(rho_a.matrix() - rho_b.matrix());
}

double parity_helstrom(const CollectiveConfig &cfg, int parity) {
    const Copies c = aligned_copies(cfg);
    const auto pairs = parity_pairs(parity);
    return helstrom_bound(tensor_product(c.of(pairs[0].first), c.of(pairs[0].second)),
                          tensor_product(c.of(pairs[1].first), c.of(pairs[1].second)));
}

CollectiveResult train_collective(const CollectiveConfig &cfg, const TrainConfig &train_cfg) {
    const Copies copies = aligned_copies(cfg);
    const ParamCircuit v = cfg.measure_circuit();
    const std::size_t n = v.n_params();
    std::vector<ShiftRule> rules(n, ShiftRule::TwoTerm);
    for (const auto &g : v.gates()) {
        if (auto k = g.trainable_index()) {
            rules[*k] = shift_rule_for(g.kind);
        }
    }

    const auto successes = [&](std::span<const double> p) {
        return std::vector<double>{success_with(copies, v, cfg.readout, 0, p.subspan(0, n)),
                                   success_with(copies, v, cfg.readout, 1, p.subspan(n, n))};
    };
    const auto objective = [&](std::span<const double> p) {
        const auto s = successes(p);
        std::vector<double> grad(2 * n);
        for (std::size_t k = 0; k < 2 * n; ++k) {
            const auto d = shift_derivative(successes, p, k, rules[k % n]);
            grad[k] = -(d[0] + d[1]) / 2;
        }
        const double mean = (s[0] + s[1]) / 2;
        return Evaluation{-mean, cfg.f_ab, mean, std::move(grad)};
    };

    CollectiveResult out;
    out.trace = descend(objective, init_params(2 * n, train_cfg), train_cfg);
    const auto &p = out.trace.final_params;
    out.lambda_even.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n));
    out.lambda_odd.assign(p.begin() + static_cast<std::ptrdiff_t>(n), p.end());
    out.success_even = success_with(copies, v, cfg.readout, 0, out.lambda_even);
    out.success_odd = success_with(copies, v, cfg.readout, 1, out.lambda_odd);
    return out;
}

CollectiveReport collective_report(const CollectiveConfig &cfg, const CollectiveResult &result) {
    const double f_ae = pccm_fidelities(cfg.theta()).f_ae;
    const auto base = individual_baseline(f_ae);
    return {cfg.f_ab, f_ae, base.raw_pair, base.postprocessed, result.success_even, result.success_odd,
            parity_helstrom(cfg, 0)};
}

}  // namespace qkdqcl
