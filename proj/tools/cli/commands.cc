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

#include "commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "qkdqcl/attacks.h"
#include "qkdqcl/bb84.h"
#include "qkdqcl/channels.h"
#include "qkdqcl/collective.h"
#include "qkdqcl/qcl.h"

#ifndef QKDQCL_VERSION
#define QKDQCL_VERSION "unknown"
#endif

namespace qkdqcl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Usage: return "usage";
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
        case ErrorKind::Runtime: return "runtime";
    }
    return "runtime";
}

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

class CsvWriter {
   public:
    CsvWriter(const fs::path &path, const std::vector<std::string> &header) : path_(path), out_(path) {
        if (!out_) {
            throw CommandError(ErrorKind::Io, "cannot write " + path.string());
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            out_ << (i ? "," : "") << header[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double> &values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            out_ << (i ? "," : "") << fmt(values[i]);
        }
        out_ << '\n';
    }

    void close() {
        out_.close();
        if (!out_) {
            throw CommandError(ErrorKind::Io, "failed writing " + path_.string());
        }
    }

   private:
    fs::path path_;
    std::ofstream out_;
};

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path);
    out << text;
    out.close();
    if (!out) {
        throw CommandError(ErrorKind::Io, "cannot write " + path.string());
    }
}

void progress(const CommandContext &ctx, const std::string &line) {
    if (ctx.log) {
        *ctx.log << line << '\n';
    }
}

std::uint64_t resolve_seed(const CommandContext &ctx, std::string_view section) {
    const std::uint64_t from_config = ctx.config.get_uint(section, "seed", 0);
    return ctx.seed.value_or(from_config);
}

std::vector<NoiseChannel> parse_noise(const Config &cfg, std::vector<NoiseChannel> fallback) {
    const auto lines = cfg.get_all("noise", "channel");
    if (lines.empty()) {
        return fallback;
    }
    std::vector<NoiseChannel> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto fail = [&](const std::string &msg) {
            throw ConfigError(cfg.location("noise", "channel", i) + ": " + msg);
        };
        std::istringstream ss(lines[i]);
        std::string kind_s;
        std::string p_s;
        std::string place_s = "before";
        std::string extra;
        ss >> kind_s >> p_s;
        if (!(ss >> place_s)) {
            place_s = "before";
        }
        if (ss >> extra) {
            fail("expected '<kind> <p> [before|after]'");
        }
        const auto kind = noise_kind_from_name(kind_s);
        if (!kind) {
            fail("unknown channel '" + kind_s + "'");
        }
        const auto place = placement_from_name(place_s);
        if (!place) {
            fail("placement must be 'before' or 'after', got '" + place_s + "'");
        }
        double p = 0;
        try {
            std::size_t used = 0;
            p = std::stod(p_s, &used);
            if (used != p_s.size()) {
                throw std::invalid_argument(p_s);
            }
        } catch (const std::exception &) {
            fail("expected a strength, got '" + p_s + "'");
        }
        if (!(p >= 0 && p <= 1)) {
            fail("strength must lie in [0, 1]");
        }
        out.push_back({*kind, p, 0, *place});
    }
    return out;
}

json noise_json(const std::vector<NoiseChannel> &noise) {
    json arr = json::array();
    for (const auto &ch : noise) {
        arr.push_back({{"kind", noise_kind_name(ch.kind)}, {"p", ch.strength}, {"placement", placement_name(ch.placement)}});
    }
    return arr;
}

json scaling_json(const NoiseScaling &s) {
    return {{"alpha", s.alpha}, {"beta", s.beta}, {"gamma", s.gamma}, {"delta", s.delta}};
}

TrainConfig read_train_config(const Config &cfg) {
    TrainConfig t;
    t.n_steps = cfg.get_uint("train", "n_steps", t.n_steps);
    t.learning_rate = cfg.get_double("train", "learning_rate", t.learning_rate);
    t.beta1 = cfg.get_double("train", "beta1", t.beta1);
    t.beta2 = cfg.get_double("train", "beta2", t.beta2);
    t.epsilon = cfg.get_double("train", "epsilon", t.epsilon);
    t.init_std = cfg.get_double("train", "init_std", t.init_std);
    try {
        validate(t);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(cfg.source() + ": [train] " + e.what());
    }
    return t;
}

// Shared by train-individual and train-noisy.
struct TrainingPlan {
    Scenario scenario;
    LossConfig loss;
    TrainConfig train;
    std::vector<double> targets;
    std::vector<std::uint64_t> round_seeds;
    std::uint64_t seed = 0;
};

TrainingPlan read_training_plan(const CommandContext &ctx, std::size_t default_rounds,
                                std::vector<NoiseChannel> default_noise) {
    const Config &cfg = ctx.config;
    const std::size_t n_anc = cfg.get_uint("ansatz", "n_ancilla", 1);
    const std::size_t u_layers = cfg.get_uint("ansatz", "u_layers", 2);
    const std::size_t v_layers = cfg.get_uint("ansatz", "v_layers", 1);
    std::vector<NoiseChannel> noise = parse_noise(cfg, std::move(default_noise));
    auto scenario = [&] {
        try {
            return hea_scenario(n_anc, u_layers, v_layers, noise);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(cfg.source() + ": [ansatz] " + e.what());
        }
    };
    TrainingPlan plan{scenario(), LossConfig{}, read_train_config(cfg), {}, {}, resolve_seed(ctx, "train")};
    plan.loss.alpha_weight = cfg.get_double("loss", "alpha", plan.loss.alpha_weight);
    const double f_min = cfg.get_double("loss", "target_f_min", 0.5);
    const double f_max = cfg.get_double("loss", "target_f_max", 1.0);
    if (!(0 <= f_min && f_min <= f_max && f_max <= 1)) {
        throw ConfigError(cfg.location("loss", "target_f_min") + ": need 0 <= target_f_min <= target_f_max <= 1");
    }
    std::vector<double> fixed = cfg.get_doubles("loss", "targets");
    std::size_t rounds = cfg.get_uint("train", "rounds", fixed.empty() ? default_rounds : fixed.size());
    if (rounds == 0) {
        throw ConfigError(cfg.location("train", "rounds") + ": need at least one round");
    }
    if (!fixed.empty() && fixed.size() != rounds) {
        throw ConfigError(cfg.location("loss", "targets") + ": expected " + std::to_string(rounds) + " targets");
    }
    for (std::size_t r = 0; r < rounds; ++r) {
        const std::uint64_t rs = derive_seed(plan.seed, r);
        plan.round_seeds.push_back(rs);
        if (fixed.empty()) {
            std::mt19937_64 rng(rs);
            plan.targets.push_back(std::uniform_real_distribution<double>(f_min, f_max)(rng));
        } else {
            plan.targets.push_back(fixed[r]);
        }
        LossConfig probe = plan.loss;
        probe.target_f = plan.targets.back();
        try {
            validate(probe);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(cfg.source() + ": [loss] " + e.what());
        }
    }
    return plan;
}

std::vector<TrainTrace> run_rounds(const CommandContext &ctx, const TrainingPlan &plan) {
    std::vector<std::future<TrainTrace>> jobs;
    for (std::size_t r = 0; r < plan.targets.size(); ++r) {
        LossConfig loss_cfg = plan.loss;
        loss_cfg.target_f = plan.targets[r];
        TrainConfig tc = plan.train;
        tc.seed = derive_seed(plan.round_seeds[r], 1);
        tc.record_params = true;
        jobs.push_back(std::async(std::launch::async,
                                  [&plan, loss_cfg, tc] { return train(plan.scenario, loss_cfg, tc); }));
    }
    std::vector<TrainTrace> traces;
    for (std::size_t r = 0; r < jobs.size(); ++r) {
        traces.push_back(jobs[r].get());
        const TrainStep &last = traces.back().steps.back();
        progress(ctx, "round " + std::to_string(r) + ": target " + fmt(plan.targets[r]) + " -> (" + fmt(last.f_ab) +
                          ", " + fmt(last.f_ae) + ")");
    }
    return traces;
}

json plan_seeds(const TrainingPlan &plan) {
    json rounds = json::array();
    for (std::size_t r = 0; r < plan.round_seeds.size(); ++r) {
        rounds.push_back({{"round", r}, {"seed", plan.round_seeds[r]}, {"init_seed", derive_seed(plan.round_seeds[r], 1)}});
    }
    return {{"seed", plan.seed}, {"rounds", rounds}};
}

Scenario protocol_attack(const Config &cfg, std::vector<NoiseChannel> noise) {
    const std::string attack = cfg.get_string("protocol", "attack", "pccm");
    if (attack == "none") {
        Scenario s{1, ParamCircuit(2), ParamCircuit(1),
                   {{WeightKey{Basis::Z, std::nullopt}, {}}, {WeightKey{Basis::X, std::nullopt}, {}}},
                   std::move(noise)};
        return s;
    }
    if (attack == "pccm") {
        return pccm_scenario(cfg.get_double("protocol", "theta", std::numbers::pi / 2), std::move(noise));
    }
    if (attack == "imbalanced") {
        return imbalanced_scenario(cfg.get_double("protocol", "psi", std::numbers::pi / 4),
                                   cfg.get_double("protocol", "phi", -std::numbers::pi / 4), std::move(noise));
    }
    throw ConfigError(cfg.location("protocol", "attack") + ": expected none, pccm or imbalanced, got '" + attack + "'");
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

fs::path default_out(const std::string &command) {
    if (command == "collective" || command == "protocol-sim") {
        return command + ".json";
    }
    return command + ".csv";
}

fs::path theory_path(const fs::path &out) {
    fs::path p = out;
    p.replace_filename(out.stem().string() + "_theory" + out.extension().string());
    return p;
}

fs::path manifest_path(const fs::path &out) {
    fs::path p = out;
    p += ".manifest.json";
    return p;
}

CommandOutput run_pccm_sweep(const CommandContext &ctx) {
    const Config &cfg = ctx.config;
    std::vector<double> thetas = cfg.get_doubles("pccm", "thetas");
    if (thetas.empty()) {
        const std::size_t n = cfg.get_uint("pccm", "n_points", 41);
        const double lo = cfg.get_double("pccm", "theta_min", 0);
        const double hi = cfg.get_double("pccm", "theta_max", std::numbers::pi);
        if (n == 0) {
            throw ConfigError(cfg.location("pccm", "n_points") + ": grid must be nonempty");
        }
        for (std::size_t k = 0; k < n; ++k) {
            thetas.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
        }
    }
    cfg.reject_unused();

    CsvWriter csv(ctx.out, {"theta", "f_ab", "f_ae", "f_ab_closed", "f_ae_closed"});
    double worst = 0;
    for (double t : thetas) {
        const FidelityReport r = evaluate_scenario(pccm_scenario(t), std::vector<double>{});
        const FidelityPair c = pccm_fidelities(t);
        worst = std::max({worst, std::abs(r.f_ab - c.f_ab), std::abs(r.f_ae - c.f_ae)});
        csv.row({t, r.f_ab, r.f_ae, c.f_ab, c.f_ae});
    }
    csv.close();
    if (worst > 1e-9) {
        throw CommandError(ErrorKind::Runtime, "simulation departs from the closed form by " + fmt(worst));
    }
    CommandOutput out;
    out.artifacts = {ctx.out};
    out.details = {{"n_points", thetas.size()}, {"max_closed_form_deviation", worst}};
    out.summary = "pccm-sweep: " + std::to_string(thetas.size()) + " points -> " + ctx.out.string();
    return out;
}

CommandOutput run_train_individual(const CommandContext &ctx) {
    const TrainingPlan plan = read_training_plan(ctx, 8, {});
    ctx.config.reject_unused();
    const std::vector<TrainTrace> traces = run_rounds(ctx, plan);

    CsvWriter csv(ctx.out, {"f_ab", "f_ae", "step"});
    json rounds = json::array();
    for (std::size_t r = 0; r < traces.size(); ++r) {
        for (const TrainStep &s : traces[r].steps) {
            csv.row({s.f_ab, s.f_ae, static_cast<double>(s.step)});
        }
        const TrainStep &last = traces[r].steps.back();
        rounds.push_back({{"round", r},
                          {"target_f", plan.targets[r]},
                          {"final_f_ab", last.f_ab},
                          {"final_f_ae", last.f_ae},
                          {"final_loss", last.loss},
                          {"curve_distance", pccm_curve_distance(last.f_ab, last.f_ae)}});
    }
    csv.close();
    CommandOutput out;
    out.artifacts = {ctx.out};
    out.seeds = plan_seeds(plan);
    out.details = {{"alpha", plan.loss.alpha_weight},
                   {"n_flat_params", n_flat_params(plan.scenario)},
                   {"noise", noise_json(plan.scenario.noise)},
                   {"rounds", rounds}};
    out.summary = "train-individual: " + std::to_string(traces.size()) + " rounds -> " + ctx.out.string();
    return out;
}

CommandOutput run_train_noisy(const CommandContext &ctx) {
    const TrainingPlan plan =
        read_training_plan(ctx, 25, {{NoiseKind::BitFlip, 0.25, 0, Placement::BeforeAttack}});
    const std::size_t n_theory = ctx.config.get_uint("theory", "n_points", 200);
    if (n_theory < 2) {
        throw ConfigError(ctx.config.location("theory", "n_points") + ": need at least 2 points");
    }
    ctx.config.reject_unused();
    const std::vector<TrainTrace> traces = run_rounds(ctx, plan);
    const NoiseScaling scaling = predict_scaling(plan.scenario.noise);

    const std::vector<std::string> header{"f_ab_Z", "f_ae_Z", "f_ab_X", "f_ae_X", "f_ab", "f_ae"};
    CsvWriter csv(ctx.out, header);
    json rounds = json::array();
    double best_margin = -1e300;
    for (std::size_t r = 0; r < traces.size(); ++r) {
        const TrainStep &last = traces[r].steps.back();
        const FidelityReport f = evaluate_flat(plan.scenario, last.params);
        csv.row({f.f_ab_z, f.f_ae_z, f.f_ab_x, f.f_ae_x, f.f_ab, f.f_ae});
        json row = {{"round", r}, {"target_f", plan.targets[r]}, {"f_ab", f.f_ab}, {"f_ae", f.f_ae}};
        const double c_ab = 2 * f.f_ab - 1;
        if (c_ab >= 0 && c_ab <= (scaling.alpha + scaling.beta) / 2) {
            const double margin = (2 * f.f_ae - 1) - pccm_average_envelope(scaling, c_ab);
            row["margin_over_pccm"] = margin;
            best_margin = std::max(best_margin, margin);
        }
        rounds.push_back(row);
    }
    csv.close();

    const fs::path theory = theory_path(ctx.out);
    CsvWriter th(theory, header);
    for (const TheoryPoint &p : imbalanced_theory_sweep(scaling, n_theory)) {
        th.row({p.f_ab_z, p.f_ae_z, p.f_ab_x, p.f_ae_x, p.f_ab, p.f_ae});
    }
    th.close();

    CommandOutput out;
    out.artifacts = {ctx.out, theory};
    out.seeds = plan_seeds(plan);
    out.details = {{"noise", noise_json(plan.scenario.noise)}, {"scaling", scaling_json(scaling)}, {"rounds", rounds}};
    if (best_margin > -1e300) {
        out.details["best_margin_over_pccm"] = best_margin;
    }
    out.summary = "train-noisy: " + std::to_string(traces.size()) + " rounds -> " + ctx.out.string() + ", " +
                  theory.string();
    return out;
}

CommandOutput run_collective(const CommandContext &ctx) {
    const Config &cfg = ctx.config;
    CollectiveConfig cc;
    cc.f_ab = cfg.get_double("collective", "f_ab", cc.f_ab);
    cc.v_layers = cfg.get_uint("collective", "v_layers", cc.v_layers);
    const std::string readout = cfg.get_string("collective", "readout", readout_name(cc.readout));
    const auto parsed = readout_from_name(readout);
    if (!parsed) {
        throw ConfigError(cfg.location("collective", "readout") + ": expected exact_pair or parity_decoded, got '" +
                          readout + "'");
    }
    cc.readout = *parsed;
    if (!(cc.f_ab >= 0.5 && cc.f_ab <= 1)) {
        throw ConfigError(cfg.location("collective", "f_ab") + ": must lie in [0.5, 1]");
    }
    if (cc.v_layers == 0) {
        throw ConfigError(cfg.location("collective", "v_layers") + ": need at least one layer");
    }
    const bool do_train = cfg.get_bool("collective", "train", true);
    TrainConfig tc = read_train_config(cfg);
    tc.seed = resolve_seed(ctx, "train");
    cfg.reject_unused();

    CollectiveResult result;
    if (do_train) {
        result = train_collective(cc, tc);
    } else {
        result.lambda_even.assign(cc.params_per_parity(), 0.0);
        result.lambda_odd.assign(cc.params_per_parity(), 0.0);
        result.success_even = collective_success(cc, 0, result.lambda_even);
        result.success_odd = collective_success(cc, 1, result.lambda_odd);
    }
    const CollectiveReport rep = collective_report(cc, result);
    const json report = {{"f_ab", rep.f_ab},
                         {"f_ae_individual", rep.f_ae_individual},
                         {"raw_pair", rep.raw_pair},
                         {"postprocessed", rep.postprocessed},
                         {"collective_success_even", rep.collective_success_even},
                         {"collective_success_odd", rep.collective_success_odd},
                         {"helstrom", rep.helstrom},
                         {"readout", readout_name(cc.readout)},
                         {"trained", do_train}};
    write_text(ctx.out, report.dump(2) + "\n");
    progress(ctx, "collective: success even " + fmt(rep.collective_success_even) + ", odd " +
                      fmt(rep.collective_success_odd) + ", helstrom " + fmt(rep.helstrom));

    CommandOutput out;
    out.artifacts = {ctx.out};
    out.seeds = {{"seed", tc.seed}};
    out.details = {{"theta", cc.theta()},
                   {"lambda_even", result.lambda_even},
                   {"lambda_odd", result.lambda_odd},
                   {"n_steps", do_train ? tc.n_steps : 0}};
    out.summary = "collective: " + ctx.out.string();
    return out;
}

CommandOutput run_protocol_sim(const CommandContext &ctx) {
    const Config &cfg = ctx.config;
    const std::size_t n_rounds = cfg.get_uint("protocol", "n_rounds", 100000);
    if (n_rounds == 0) {
        throw ConfigError(cfg.location("protocol", "n_rounds") + ": need at least one round");
    }
    const std::uint64_t seed = resolve_seed(ctx, "protocol");
    Scenario s = protocol_attack(cfg, parse_noise(cfg, {}));
    cfg.reject_unused();

    const FidelityReport ref = evaluate_scenario(s, std::vector<double>{});
    const ProtocolSample m = monte_carlo_protocol(s, std::vector<double>{}, n_rounds, seed);
    const double ns = static_cast<double>(std::max<std::size_t>(m.n_sifted, 1));
    const json report = {
        {"qber_hat", m.qber_hat},
        {"eve_match_hat", m.eve_match_hat},
        {"n_sifted", m.n_sifted},
        {"n_rounds", m.n_rounds},
        {"seed", m.seed},
        {"reference", {{"qber", ref.qber}, {"f_ae", ref.f_ae}, {"sift_rate", 0.5}}},
        {"sigma",
         {{"qber", std::sqrt(ref.qber * (1 - ref.qber) / ns)},
          {"eve_match", std::sqrt(ref.f_ae * (1 - ref.f_ae) / ns)},
          {"n_sifted", std::sqrt(static_cast<double>(n_rounds) * 0.25)}}},
    };
    write_text(ctx.out, report.dump(2) + "\n");
    CommandOutput out;
    out.artifacts = {ctx.out};
    out.seeds = {{"seed", seed}};
    out.details = {{"noise", noise_json(s.noise)}};
    out.summary = "protocol-sim: qber_hat " + fmt(m.qber_hat) + " (reference " + fmt(ref.qber) + ") -> " +
                  ctx.out.string();
    return out;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Density-matrix simulation and training of BB84 eavesdropping attacks", "qkdqcl"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QKDQCL_VERSION);
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Primary output file");
    CLI::Option *seed_opt = app.add_option("--seed", seed, "Master seed, overrides the config");
    app.add_flag("--quiet", quiet, "Suppress progress output");

    using Runner = std::function<CommandOutput(const CommandContext &)>;
    const std::vector<std::tuple<std::string, std::string, Runner>> commands{
        {"pccm-sweep", "PCCM fidelities over a theta grid (CSV)", run_pccm_sweep},
        {"train-individual", "Train individual attacks with QCL (CSV)", run_train_individual},
        {"train-noisy", "Train under line noise, plus theory curves (CSV)", run_train_noisy},
        {"collective", "Collective two-qubit attack report (JSON)", run_collective},
        {"protocol-sim", "Monte Carlo BB84 rounds under an attack (JSON)", run_protocol_sim},
    };
    std::map<const CLI::App *, const Runner *> runners;
    for (const auto &[name, help, fn] : commands) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->fallthrough();
        runners[sub] = &fn;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: usage: " << msg << '\n';
        return static_cast<int>(ErrorKind::Usage);
    }

    const CLI::App *chosen = app.get_subcommands().front();
    CommandContext ctx;
    ctx.command = chosen->get_name();
    ctx.out = out_path.empty() ? default_out(ctx.command) : fs::path(out_path);
    if (*seed_opt) {
        ctx.seed = seed;
    }
    ctx.quiet = quiet;
    ctx.log = quiet ? nullptr : &err;

    json manifest = {{"command", ctx.command}, {"version", QKDQCL_VERSION}, {"started_utc", utc_now()}};
    json args = json::array();
    for (int i = 0; i < argc; ++i) {
        args.push_back(argv[i]);
    }
    manifest["argv"] = args;
    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    std::string error_line;
    try {
        if (!config_path.empty()) {
            ctx.config = Config::load(config_path);
        }
        manifest["config"] = {{"source", config_path.empty() ? json(nullptr) : json(config_path)},
                              {"snapshot", ctx.config.snapshot()}};
        const CommandOutput result = (*runners.at(chosen))(ctx);
        json artifacts = json::array();
        for (const auto &p : result.artifacts) {
            artifacts.push_back(p.string());
        }
        manifest["artifacts"] = artifacts;
        manifest["seeds"] = result.seeds;
        manifest["details"] = result.details;
        manifest["status"] = "ok";
        manifest["error"] = nullptr;
        if (!quiet) {
            out << result.summary << '\n';
        }
    } catch (const std::exception &e) {
        ErrorKind kind = ErrorKind::Runtime;
        if (dynamic_cast<const ConfigError *>(&e)) {
            kind = ErrorKind::Config;
        } else if (const auto *ce = dynamic_cast<const CommandError *>(&e)) {
            kind = ce->kind();
        }
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        error_line = "error: " + error_kind_name(kind) + ": " + msg;
        code = static_cast<int>(kind);
        manifest["status"] = "error";
        manifest["error"] = {{"kind", error_kind_name(kind)}, {"message", msg}};
        if (!manifest.contains("artifacts")) {
            manifest["artifacts"] = json::array();
        }
    }
    manifest["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream mf(manifest_path(ctx.out));
    mf << manifest.dump(2) << '\n';
    mf.close();
    if (!mf && code == 0) {
        error_line = "error: io: cannot write " + manifest_path(ctx.out).string();
        code = static_cast<int>(ErrorKind::Io);
    }
    if (code != 0) {
        err << error_line << '\n';
    }
    return code;
}

}  // namespace qkdqcl::cli
