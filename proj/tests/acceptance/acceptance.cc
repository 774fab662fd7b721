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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails. Usage: qkdqcl_acceptance [N...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli/commands.h"
#include "qkdqcl/attacks.h"
#include "qkdqcl/bb84.h"
#include "qkdqcl/collective.h"
#include "qkdqcl/qcl.h"
#include "test_util.h"

namespace {

using namespace qkdqcl;
constexpr double kPi = std::numbers::pi;

// Tolerances, one block per criterion.
constexpr double kC1ClosedFormTol = 1e-9;
constexpr double kC1SymmetricValue = 0.8536;
constexpr double kC1SymmetricTol = 5e-4;
constexpr std::size_t kC1GridPoints = 41;

constexpr std::size_t kC2Rounds = 8;
constexpr std::size_t kC2Params = 18;
constexpr double kC2CurveTol = 0.01;

constexpr double kC3Tol = 1e-9;
constexpr int kC3Pairs = 25;

constexpr double kC4Tol = 1e-9;
constexpr int kC4Grid = 50;

constexpr double kC5MatrixTol = 5e-4;
constexpr double kC5BaselineRaw = 0.656;
constexpr double kC5BaselinePost = 0.810;
constexpr double kC5BaselineTol = 5e-4;
constexpr double kC5Success = 0.894;
constexpr double kC5SuccessTol = 0.005;
constexpr double kC5HelstromTol = 1e-3;

constexpr double kC6Step = 1e-5;
constexpr double kC6Tol = 1e-6;
constexpr int kC6Circuits = 20;

constexpr std::size_t kC7Rounds = 100000;
constexpr double kC7Sigmas = 4;

constexpr double kC8Tol = 1e-6;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

struct CenteredAvg {
    double c_ab;
    double c_ae;
    CenteredFidelities parts;
};

CenteredAvg simulate_centered(const Scenario &s) {
    const CenteredFidelities c = centered(evaluate_scenario(s, std::vector<double>{}));
    return {(c.c_ab_z + c.c_ab_x) / 2, (c.c_ae_z + c.c_ae_x) / 2, c};
}

Verdict criterion1() {
    double worst = 0;
    for (std::size_t k = 0; k < kC1GridPoints; ++k) {
        const double t = kPi * static_cast<double>(k) / static_cast<double>(kC1GridPoints - 1);
        const FidelityReport r = evaluate_scenario(pccm_scenario(t), std::vector<double>{});
        worst = std::max({worst, std::abs(r.f_ab - (1 + std::cos(t / 2)) / 2),
                          std::abs(r.f_ae - (1 + std::sin(t / 2)) / 2)});
    }
    const FidelityReport sym = evaluate_scenario(pccm_scenario(kPi / 2), std::vector<double>{});
    const bool ok = worst <= kC1ClosedFormTol && std::abs(sym.f_ab - kC1SymmetricValue) <= kC1SymmetricTol &&
                    std::abs(sym.f_ae - kC1SymmetricValue) <= kC1SymmetricTol;
    return {ok, "max deviation " + num(worst) + " (tol " + num(kC1ClosedFormTol) + "); symmetric point (" +
                    num(sym.f_ab) + ", " + num(sym.f_ae) + ") vs " + num(kC1SymmetricValue) + " +- " +
                    num(kC1SymmetricTol)};
}

struct TrainedRun {
    nlohmann::json details;
    std::vector<std::pair<double, double>> points;  ///< every recorded (F_AB, F_AE)
};

// Runs train-individual with its defaults through the command layer, once.
const TrainedRun &default_training() {
    static const TrainedRun run = [] {
        const auto out = std::filesystem::temp_directory_path() /
                         ("qkdqcl_acceptance_" + std::to_string(::getpid()) + ".csv");
        cli::CommandContext ctx;
        ctx.command = "train-individual";
        ctx.out = out;
        TrainedRun r{cli::run_train_individual(ctx).details, {}};
        std::ifstream in(out);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            double f_ab = 0;
            double f_ae = 0;
            if (std::sscanf(line.c_str(), "%lf,%lf", &f_ab, &f_ae) == 2) {
                r.points.emplace_back(f_ab, f_ae);
            }
        }
        std::filesystem::remove(out);
        return r;
    }();
    return run;
}

Verdict criterion2() {
    const nlohmann::json &d = default_training().details;
    const std::size_t n_params = d.at("n_flat_params");
    const auto &rounds = d.at("rounds");
    double worst = 0;
    for (const auto &r : rounds) {
        worst = std::max(worst, pccm_curve_distance(r.at("final_f_ab"), r.at("final_f_ae")));
    }
    const bool ok = rounds.size() == kC2Rounds && n_params == kC2Params && d.at("alpha") == 10.0 && worst <= kC2CurveTol;
    return {ok, std::to_string(rounds.size()) + " rounds, " + std::to_string(n_params) +
                    " parameters; worst final distance to the PCCM curve " + num(worst) + " (tol " +
                    num(kC2CurveTol) + ")"};
}

Verdict criterion3() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    double worst = 0;
    for (int i = 0; i < kC3Pairs; ++i) {
        const double psi = angle(rng);
        const double phi = angle(rng);
        const CenteredFidelities c = simulate_centered(imbalanced_scenario(psi, phi)).parts;
        worst = std::max({worst, std::abs(c.c_ab_z - std::sin(psi)), std::abs(c.c_ab_x - std::cos(phi)),
                          std::abs(c.c_ae_z + std::sin(phi)), std::abs(c.c_ae_x - std::cos(psi))});
    }
    return {worst <= kC3Tol,
            std::to_string(kC3Pairs) + " pairs, max deviation " + num(worst) + " (tol " + num(kC3Tol) + ")"};
}

// PCCM angle whose simulated average centered Bob fidelity equals `c_ab`.
double matched_pccm_theta(double c_ab, const std::vector<NoiseChannel> &noise) {
    double lo = 0;
    double hi = kPi;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (simulate_centered(pccm_scenario(mid, noise)).c_ab > c_ab ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct Comparison {
    double best_gain = -1;
    double worst_loss = 0;
    double envelope_dev = 0;
};

Comparison compare_cloners(const std::vector<NoiseChannel> &noise) {
    const NoiseScaling sc = predict_scaling(noise);
    Comparison out;
    for (int k = 1; k < kC4Grid; ++k) {
        const double psi = (kPi / 2) * k / kC4Grid;
        const CenteredAvg imb = simulate_centered(imbalanced_scenario(psi, optimal_phi(psi, sc), noise));
        const CenteredAvg pccm = simulate_centered(pccm_scenario(matched_pccm_theta(imb.c_ab, noise), noise));
        out.best_gain = std::max(out.best_gain, imb.c_ae - pccm.c_ae);
        out.worst_loss = std::max(out.worst_loss, std::abs(imb.c_ae - pccm.c_ae));
        out.envelope_dev = std::max({out.envelope_dev, std::abs(imb.parts.c_ae_z - envelope_z(sc, imb.parts.c_ab_z)),
                                     std::abs(imb.parts.c_ae_x - envelope_x(sc, imb.parts.c_ab_x))});
    }
    return out;
}

Verdict criterion4() {
    const std::vector<NoiseChannel> bit_flip{{NoiseKind::BitFlip, 0.25, 0, Placement::BeforeAttack}};
    const NoiseScaling sc = predict_scaling(bit_flip);
    const bool scaling_ok = std::abs(sc.alpha - 0.5) < 1e-12 && std::abs(sc.gamma - 0.5) < 1e-12 &&
                            std::abs(sc.beta - 1) < 1e-12 && std::abs(sc.delta - 1) < 1e-12;
    const Comparison noisy = compare_cloners(bit_flip);
    const Comparison clean = compare_cloners({});
    const Comparison depol = compare_cloners({{NoiseKind::BitFlip, 0.25, 0, Placement::BeforeAttack},
                                              {NoiseKind::PhaseFlip, 0.25, 0, Placement::BeforeAttack}});
    const double balanced_gap = std::max(clean.worst_loss, depol.worst_loss);
    const double env = std::max({noisy.envelope_dev, clean.envelope_dev, depol.envelope_dev});
    const bool ok = scaling_ok && noisy.best_gain > kC4Tol && balanced_gap <= kC4Tol && env <= kC4Tol;
    return {ok, "bit-flip best C_AE gain " + num(noisy.best_gain) + " (> " + num(kC4Tol) + "); balanced max gap " +
                    num(balanced_gap) + "; envelope deviation " + num(env) + " (tol " + num(kC4Tol) + ")"};
}

Verdict criterion5() {
    const ComplexMatrix rho0{{0.810, 0.307}, {0.307, 0.190}};
    const ComplexMatrix rho1{{0.190, 0.307}, {0.307, 0.810}};
    const CollectiveConfig cfg;
    const double theta = cfg.theta();
    double mat_dev = 0;
    for (Basis b : kBases) {
        mat_dev = std::max({mat_dev, eve_aligned_copy(0, b, theta).matrix().max_abs_diff(rho0),
                            eve_aligned_copy(1, b, theta).matrix().max_abs_diff(rho1)});
    }
    const IndividualBaseline base = individual_baseline(pccm_fidelities(theta).f_ae);
    const bool base_ok = std::abs(base.raw_pair - kC5BaselineRaw) <= kC5BaselineTol &&
                         std::abs(base.postprocessed - kC5BaselinePost) <= kC5BaselineTol;
    const CollectiveResult res = train_collective(cfg, TrainConfig{});
    const double h_even = parity_helstrom(cfg, 0);
    const double h_odd = parity_helstrom(cfg, 1);
    const bool success_ok = std::abs(res.success_even - kC5Success) <= kC5SuccessTol &&
                            std::abs(res.success_odd - kC5Success) <= kC5SuccessTol;
    const bool helstrom_ok =
        std::abs(h_even - res.success_even) <= kC5HelstromTol && std::abs(h_odd - res.success_odd) <= kC5HelstromTol;
    const bool mat_ok = mat_dev <= kC5MatrixTol;
    auto mark = [](bool b) { return std::string(b ? "ok" : "FAIL"); };
    return {mat_ok && base_ok && success_ok && helstrom_ok,
            "matrices " + mark(mat_ok) + " (deviation " + num(mat_dev) + ", tol " + num(kC5MatrixTol) +
                "); baseline " + mark(base_ok) + " (" + num(base.raw_pair) + ", " + num(base.postprocessed) +
                ") vs (" + num(kC5BaselineRaw) + ", " + num(kC5BaselinePost) + ") +- " + num(kC5BaselineTol) +
                "; trained success " + mark(success_ok) + " (" + num(res.success_even) + ", " +
                num(res.success_odd) + ") vs " + num(kC5Success) + " +- " + num(kC5SuccessTol) + "; helstrom " +
                mark(helstrom_ok) + " (" + num(h_even) + ", " + num(h_odd) + ") tol " + num(kC5HelstromTol)};
}

Verdict criterion6() {
    std::mt19937_64 rng(6);
    double worst = 0;
    std::size_t n_checked = 0;
    for (int i = 0; i < kC6Circuits; ++i) {
        const Scenario s = testing::random_scenario(rng);
        const std::vector<double> flat = testing::random_angles(n_flat_params(s), rng);
        for (std::size_t k = 0; k < flat.size(); ++k) {
            const FidelityGradient g = fidelity_gradient(s, flat, k);
            const auto [d_ab, d_ae] = testing::central_difference(s, flat, k, kC6Step);
            worst = std::max({worst, std::abs(g.d_f_ab - d_ab), std::abs(g.d_f_ae - d_ae)});
            ++n_checked;
        }
    }
    return {worst <= kC6Tol, std::to_string(kC6Circuits) + " circuits, " + std::to_string(n_checked) +
                                 " parameters, max |shift - fd| " + num(worst) + " (tol " + num(kC6Tol) + ")"};
}

Verdict criterion7() {
    const Scenario s = pccm_scenario(kPi / 2);
    const double qber = 1 - evaluate_scenario(s, std::vector<double>{}).f_ab;
    const ProtocolSample m = monte_carlo_protocol(s, std::vector<double>{}, kC7Rounds, 7);
    const double n_s = static_cast<double>(m.n_sifted);
    const double sigma_q = std::sqrt(qber * (1 - qber) / n_s);
    const double sift = n_s / static_cast<double>(kC7Rounds);
    const double sigma_s = std::sqrt(0.25 / static_cast<double>(kC7Rounds));
    const double z_q = std::abs(m.qber_hat - qber) / sigma_q;
    const double z_s = std::abs(sift - 0.5) / sigma_s;
    return {z_q <= kC7Sigmas && z_s <= kC7Sigmas, "qber " + num(m.qber_hat) + " vs " + num(qber) + " (" + num(z_q) +
                                                      " sigma); sift rate " + num(sift) + " (" + num(z_s) +
                                                      " sigma); limit " + num(kC7Sigmas) + " sigma"};
}

// F_AE ceiling over the noise-free individual attacks; any F_AE is admissible
// once Bob's fidelity is at or below one half.
double pccm_envelope(double f_ab) { return f_ab <= 0.5 ? 1.0 : 0.5 + std::sqrt(f_ab * (1 - f_ab)); }

Verdict criterion8() {
    // Every recorded step of the criterion-2 rounds, not just the final ones.
    const auto &points = default_training().points;
    double worst = -1;
    for (const auto &[f_ab, f_ae] : points) {
        worst = std::max(worst, f_ae - pccm_envelope(f_ab));
    }
    return {!points.empty() && worst <= kC8Tol, std::to_string(points.size()) +
                                                    " trained points, max excess over the envelope " + num(worst) +
                                                    " (tol " + num(kC8Tol) + ")"};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>> kCriteria{
    {"PCCM closed form", criterion1},
    {"QCL reaches the individual-attack optimum", criterion2},
    {"imbalanced cloner closed form", criterion3},
    {"noisy-channel dominance", criterion4},
    {"collective attack", criterion5},
    {"parameter-shift gradients", criterion6},
    {"Monte Carlo protocol consistency", criterion7},
    {"trained points respect the PCCM envelope", criterion8},
};

}  // namespace

int main(int argc, char **argv) {
    std::vector<std::size_t> selected;
    for (int i = 1; i < argc; ++i) {
        const long k = std::strtol(argv[i], nullptr, 10);
        if (k < 1 || k > static_cast<long>(kCriteria.size())) {
            std::cerr << "error: usage: unknown criterion '" << argv[i] << "'\n";
            return 2;
        }
        selected.push_back(static_cast<std::size_t>(k));
    }
    if (selected.empty()) {
        for (std::size_t k = 1; k <= kCriteria.size(); ++k) {
            selected.push_back(k);
        }
    }
    int failures = 0;
    for (std::size_t k : selected) {
        const auto &[name, check] = kCriteria[k - 1];
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v{false, ""};
        try {
            v = check();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << k << " (" << name << "): " << v.detail << " ["
                  << num(secs) << " s]" << std::endl;
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
