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

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "qkdqcl/attacks.h"
#include "qkdqcl/bb84.h"
#include "qkdqcl/circuits.h"
#include "qkdqcl/collective.h"
#include "qkdqcl/qcl.h"
#include "qkdqcl/qmat.h"

namespace {

using namespace qkdqcl;

ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c <= r; ++c) {
            const Complex z{n(rng), r == c ? 0.0 : n(rng)};
            m(r, c) = z;
            m(c, r) = std::conj(z);
        }
    }
    return m;
}

std::vector<double> random_params(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> a(-std::numbers::pi, std::numbers::pi);
    std::vector<double> out(n);
    for (double &x : out) {
        x = a(rng);
    }
    return out;
}

void BM_hermitian_eigen(benchmark::State &state) {
    const ComplexMatrix m = random_hermitian(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hermitian_eigen(m));
    }
}
BENCHMARK(BM_hermitian_eigen)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_fidelity_general(benchmark::State &state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    const DensityMatrix a = DensityMatrix::maximally_mixed(dim);
    const ComplexMatrix h = random_hermitian(dim, 2);
    ComplexMatrix b = h * h.adjoint();
    b *= 1.0 / b.trace().real();
    const DensityMatrix rho(b);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fidelity_general(a, rho));
    }
}
BENCHMARK(BM_fidelity_general)->Arg(2)->Arg(4)->Arg(8);

void BM_apply_circuit(benchmark::State &state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const ParamCircuit c = build_hea(n, 2);
    const std::vector<double> params = random_params(c.n_params(), 3);
    const DensityMatrix rho = DensityMatrix::from_pure(PureState::basis(std::size_t{1} << n, 0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_circuit(rho, c, params));
    }
}
BENCHMARK(BM_apply_circuit)->DenseRange(1, 4);

void BM_evaluate_scenario(benchmark::State &state) {
    const Scenario s = hea_scenario(static_cast<std::size_t>(state.range(0)), 2, 1);
    const std::vector<double> flat = random_params(n_flat_params(s), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_flat(s, flat));
    }
}
BENCHMARK(BM_evaluate_scenario)->Arg(1)->Arg(2);

void BM_loss_gradient(benchmark::State &state) {
    const Scenario s = hea_scenario(1, 2, 1);
    const std::vector<double> flat = random_params(n_flat_params(s), 5);
    const LossConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(loss_gradient(s, flat, cfg));
    }
}
BENCHMARK(BM_loss_gradient);

void BM_train_round(benchmark::State &state) {
    const Scenario s = hea_scenario(1, 2, 1);
    const LossConfig loss_cfg;
    const TrainConfig train_cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(s, loss_cfg, train_cfg));
    }
}
BENCHMARK(BM_train_round)->Unit(benchmark::kMillisecond);

void BM_collective_success(benchmark::State &state) {
    const CollectiveConfig cfg;
    const std::vector<double> lambda = random_params(cfg.params_per_parity(), 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(collective_success(cfg, 0, lambda));
    }
}
BENCHMARK(BM_collective_success);

void BM_monte_carlo_protocol(benchmark::State &state) {
    const Scenario s = pccm_scenario(std::numbers::pi / 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo_protocol(s, std::vector<double>{}, 10000, 7));
    }
}
BENCHMARK(BM_monte_carlo_protocol)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
