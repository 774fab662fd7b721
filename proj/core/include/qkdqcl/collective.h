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

#ifndef QKDQCL_COLLECTIVE_H
#define QKDQCL_COLLECTIVE_H

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qkdqcl/basis.h"
#include "qkdqcl/circuits.h"
#include "qkdqcl/qcl.h"
#include "qkdqcl/qmat.h"

namespace qkdqcl {

/// θ in [0, π] with (1 + cos(θ/2))/2 = f_ab, by bisection to 1e-12.
double solve_pccm_theta(double f_ab);

/// Eve's PCCM copy of prepare_state(x, basis) after the basis alignment
/// (Z basis: S then Z; X basis: H then S). Depends on x only.
DensityMatrix eve_aligned_copy(int x, Basis basis, double theta);

struct IndividualBaseline {
    double raw_pair;       ///< F_AE²: both bits right from separate measurements
    double postprocessed;  ///< F_AE² + F_AE(1 - F_AE) with the parity-flip fix
};

IndividualBaseline individual_baseline(double f_ae);

/// How Eve turns her two-qubit Z readout into a guess for Alice's pair.
/// ExactPair: both readout bits must equal the pair. ParityDecoded: only
/// copy 0 is read; the second bit follows from the announced parity.
enum class CollectiveReadout { ExactPair, ParityDecoded };

std::string_view readout_name(CollectiveReadout r);
std::optional<CollectiveReadout> readout_from_name(std::string_view name);

/// Two PCCM copies at the operating point where Bob's fidelity is `f_ab`,
/// measured jointly after a parity-conditioned two-qubit HEA.
struct CollectiveConfig {
    double f_ab = 0.892;
    std::size_t v_layers = 2;
    CollectiveReadout readout = CollectiveReadout::ExactPair;

    double theta() const { return solve_pccm_theta(f_ab); }
    ParamCircuit measure_circuit() const { return build_hea(2, v_layers); }
    std::size_t params_per_parity() const { return 6 * v_layers; }
};

/// The two equiprobable key pairs compatible with `parity` (0 even, 1 odd).
std::vector<std::pair<int, int>> parity_pairs(int parity);

/// Mean probability, over the pairs compatible with `parity`, that Eve's
/// guess after V(lambda) equals Alice's pair (see CollectiveReadout).
double collective_success(const CollectiveConfig &cfg, int parity, std::span<const double> lambda);

/// 1/2 + ‖a - b‖₁/4, the optimal two-state discrimination success at equal priors.
double helstrom_bound(const DensityMatrix &rho_a, const DensityMatrix &rho_b);

/// Helstrom bound between the two joint copies compatible with `parity`.
double parity_helstrom(const CollectiveConfig &cfg, int parity);

struct CollectiveResult {
    TrainTrace trace;  ///< f_ab holds the operating point, f_ae the mean success
    double success_even = 0;
    double success_odd = 0;
    std::vector<double> lambda_even;
    std::vector<double> lambda_odd;
};

/// Trains both parity weight sets jointly with loss -(s_even + s_odd)/2.
CollectiveResult train_collective(const CollectiveConfig &cfg, const TrainConfig &train_cfg);

struct CollectiveReport {
    double f_ab;
    double f_ae_individual;
    double raw_pair;
    double postprocessed;
    double collective_success_even;
    double collective_success_odd;
    double helstrom;
};

CollectiveReport collective_report(const CollectiveConfig &cfg, const CollectiveResult &result);

}  // namespace qkdqcl

#endif
