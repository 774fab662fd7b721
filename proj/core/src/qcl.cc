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

#include "qkdqcl/qcl.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace qkdqcl {

namespace {

constexpr double kPi = std::numbers::pi;

// Four-term coefficients for a generator with eigenvalues {0, ±1/2}.
const double kD1 = (std::numbers::sqrt2 + 1) / (4 * std::numbers::sqrt2);
const double kD2 = (std::numbers::sqrt2 - 1) / (4 * std::numbers::sqrt2);

/// Scenario with one gate occurrence rebound to a fresh trailing slot, so
/// that shifting the slot moves that gate alone.
struct IsolatedOccurrence {
    Scenario scenario;
    std::vector<double> theta;
    std::size_t slot;
    GateKind kind;
};

ParamCircuit rebind(const ParamCircuit &c, std::size_t gate_pos, std::size_t slot) {
    ParamCircuit out(c.n_qubits());
    for (std::size_t k = 0; k < c.size(); ++k) {
        GateInstance g = c.gates()[k];
        if (k == gate_pos) {
            g.param = ParamIndex{slot};
        }
        out.add(g);
    }
    return out;
}

std::vector<double> fidelity_pair(const FidelityReport &r) {
    return {r.f_ab, r.f_ae};
}

}  // namespace

void validate(const LossConfig &cfg) {
    if (!(cfg.alpha_weight > 0)) {
        throw std::invalid_argument("loss weight alpha must be positive");
    }
    if (!(cfg.target_f >= 0.5 && cfg.target_f <= 1.0)) {
        throw std::invalid_argument("target fidelity must lie in [0.5, 1]");
    }
}

void validate(const TrainConfig &cfg) {
    if (cfg.n_steps == 0) {
        throw std::invalid_argument("n_steps must be at least 1");
    }
    if (!(cfg.learning_rate > 0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    if (!(cfg.beta1 >= 0 && cfg.beta1 < 1) || !(cfg.beta2 >= 0 && cfg.beta2 < 1)) {
        throw std::invalid_argument("Adam betas must lie in [0, 1)");
    }
    if (!(cfg.epsilon > 0)) {
        throw std::invalid_argument("Adam epsilon must be positive");
    }
    if (!(cfg.init_std >= 0)) {
        throw std::invalid_argument("init_std must be non-negative");
    }
}

double loss(double f_ab, double f_ae, const LossConfig &cfg) {
    const double d = f_ab - cfg.target_f;
    return cfg.alpha_weight * d * d - f_ae;
}

ShiftRule shift_rule_for(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
            return ShiftRule::TwoTerm;
        case GateKind::CRY:
            return ShiftRule::FourTerm;
        default:
            throw std::invalid_argument(std::string("no shift rule for gate ") + std::string(gate_name(kind)));
    }
}

std::vector<double> shift_derivative(const VectorObjective &f, std::span<const double> params, std::size_t index,
                                     ShiftRule rule) {
    if (index >= params.size()) {
        throw std::out_of_range("shift_derivative: index out of range");
    }
    std::vector<double> p(params.begin(), params.end());
    auto at = [&](double shift) {
        p[index] = params[index] + shift;
        auto v = f(p);
        p[index] = params[index];
        return v;
    };
    const auto plus = at(kPi / 2);
    const auto minus = at(-kPi / 2);
    std::vector<double> d(plus.size());
    if (rule == ShiftRule::TwoTerm) {
        for (std::size_t k = 0; k < d.size(); ++k) {
            d[k] = (plus[k] - minus[k]) / 2;
        }
        return d;
    }
    const auto plus3 = at(3 * kPi / 2);
    const auto minus3 = at(-3 * kPi / 2);
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = kD1 * (plus[k] - minus[k]) - kD2 * (plus3[k] - minus3[k]);
    }
    return d;
}

FidelityGradient fidelity_gradient(const Scenario &s, std::span<const double> flat, std::size_t index) {
    if (index >= n_flat_params(s)) {
        throw std::out_of_range("fidelity_gradient: parameter index " + std::to_string(index) + " out of range");
    }
    Scenario base = s;
    const std::vector<double> theta = unflatten_params(base, flat);
    const std::size_t nu = s.attack.n_params();
    const std::size_t nv = s.measure.n_params();

    std::vector<IsolatedOccurrence> sites;
    if (index < nu) {
        for (std::size_t k = 0; k < s.attack.size(); ++k) {
            const auto &g = s.attack.gates()[k];
            if (g.trainable_index() == index) {
                Scenario sc = base;
                sc.attack = rebind(s.attack, k, nu);
                std::vector<double> th = theta;
                th.push_back(theta[index]);
                sites.push_back({std::move(sc), std::move(th), nu, g.kind});
            }
        }
    } else {
        const std::size_t j = (index - nu) % nv;
        for (std::size_t k = 0; k < s.measure.size(); ++k) {
            const auto &g = s.measure.gates()[k];
            if (g.trainable_index() == j) {
                Scenario sc = base;
                sc.measure = rebind(s.measure, k, nv);
                for (auto &[kk, w] : sc.v_weights) {
                    w.push_back(w[j]);
                }
                sites.push_back({std::move(sc), theta, nv, g.kind});
            }
        }
    }

    FidelityGradient out{0, 0};
    for (auto &site : sites) {
        const ShiftRule rule = shift_rule_for(site.kind);
        std::vector<double> d;
        if (index < nu) {
            const auto f = [&](std::span<const double> th) { return fidelity_pair(evaluate_scenario(site.scenario, th)); };
            d = shift_derivative(f, site.theta, site.slot, rule);
        } else {
            // Shift the isolated slot only inside the weight set being differentiated.
            const std::size_t set = (index - nu) / nv;
            auto key_it = site.scenario.v_weights.begin();
            std::advance(key_it, static_cast<std::ptrdiff_t>(set));
            const std::vector<double> w0 = key_it->second;
            const auto f = [&](std::span<const double> w) {
                key_it->second.assign(w.begin(), w.end());
                return fidelity_pair(evaluate_scenario(site.scenario, site.theta));
            };
            d = shift_derivative(f, w0, site.slot, rule);
            key_it->second = w0;
        }
        out.d_f_ab += d[0];
        out.d_f_ae += d[1];
    }
    return out;
}

std::vector<double> loss_gradient(const Scenario &s, std::span<const double> flat, const LossConfig &cfg) {
    const FidelityReport r = evaluate_flat(s, flat);
    const double bob_weight = 2 * cfg.alpha_weight * (r.f_ab - cfg.target_f);
    std::vector<double> g(flat.size());
    for (std::size_t k = 0; k < flat.size(); ++k) {
        const auto d = fidelity_gradient(s, flat, k);
        g[k] = bob_weight * d.d_f_ab - d.d_f_ae;
    }
    return g;
}

void adam_step(std::vector<double> &params, AdamState &state, std::span<const double> grad, const TrainConfig &cfg) {
    if (grad.size() != params.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
        throw std::invalid_argument("adam_step: dimension mismatch");
    }
    ++state.t;
    const double t = static_cast<double>(state.t);
    const double c1 = 1 - std::pow(cfg.beta1, t);
    const double c2 = 1 - std::pow(cfg.beta2, t);
    for (std::size_t k = 0; k < params.size(); ++k) {
        state.m[k] = cfg.beta1 * state.m[k] + (1 - cfg.beta1) * grad[k];
        state.v[k] = cfg.beta2 * state.v[k] + (1 - cfg.beta2) * grad[k] * grad[k];
        const double mhat = state.m[k] / c1;
        const double vhat = state.v[k] / c2;
        params[k] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
}

std::vector<double> init_params(std::size_t n, const TrainConfig &cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, cfg.init_std);
    std::vector<double> p(n);
    for (auto &x : p) {
        x = cfg.init_std == 0 ? 0.0 : normal(rng);
    }
    return p;
}

TrainTrace descend(const GradientObjective &objective, std::vector<double> init, const TrainConfig &cfg) {
    validate(cfg);
    TrainTrace trace;
    trace.steps.reserve(cfg.n_steps);
    std::vector<double> params = std::move(init);
    AdamState state(params.size());
    for (std::size_t step = 0; step < cfg.n_steps; ++step) {
        Evaluation e = objective(params);
        TrainStep rec{step, e.f_ab, e.f_ae, e.loss, {}};
        if (cfg.record_params) {
            rec.params = params;
        }
        trace.steps.push_back(std::move(rec));
        adam_step(params, state, e.grad, cfg);
    }
    trace.final_params = std::move(params);
    return trace;
}

Scenario hea_scenario(std::size_t n_ancilla, std::size_t u_layers, std::size_t v_layers,
                      std::vector<NoiseChannel> noise) {
    Scenario s{n_ancilla, build_hea(1 + n_ancilla, u_layers), build_hea(n_ancilla, v_layers), {}, std::move(noise)};
    for (Basis b : kBases) {
        s.v_weights[WeightKey{b, std::nullopt}] = std::vector<double>(s.measure.n_params(), 0.0);
    }
    validate_scenario(s);
    return s;
}

TrainTrace train(const Scenario &s, const LossConfig &loss_cfg, const TrainConfig &train_cfg) {
    validate(loss_cfg);
    validate_scenario(s);
    const auto objective = [&](std::span<const double> flat) {
        const FidelityReport r = evaluate_flat(s, flat);
        return Evaluation{loss(r.f_ab, r.f_ae, loss_cfg), r.f_ab, r.f_ae, loss_gradient(s, flat, loss_cfg)};
    };
    return descend(objective, init_params(n_flat_params(s), train_cfg), train_cfg);
}

}  // namespace qkdqcl
