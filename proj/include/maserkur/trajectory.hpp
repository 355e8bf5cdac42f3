// Copyright 2026 The maserkur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Quantum-jump unraveling of the two quantum models. Each trajectory starts
// in the ground level, evolves under the non-Hermitian effective Hamiltonian
// and jumps when its squared norm falls below a uniform threshold.
//
// Estimators use only the jumps in the window (burn_in, t_final]:
//   current  = mean(net cold emissions) / T
//   variance = var(net cold emissions) / T      (ensemble over trajectories)
//   activity = mean(total jumps) / T

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "maserkur/params.hpp"

namespace maserkur {

enum class Propagator {
  Exact,  ///< closed-form no-jump evolution, waiting times solved to roundoff
  Euler,  ///< first-order steps of fixed dt
};

struct TrajectoryConfig {
  double t_final = 0.0;
  double dt = 0.0;  ///< Euler only; 0 selects 0.01 / max_rate
  std::uint64_t n_traj = 0;
  std::uint64_t seed = 0;
  double burn_in = 0.0;
  Propagator method = Propagator::Exact;
  unsigned threads = 1;  ///< 0 = all hardware threads
  unsigned batches = 20;  ///< batch count for the Fano standard error
};

class TrajectoryConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum Channel : int { HotEmit = 0, HotAbsorb = 1, ColdEmit = 2, ColdAbsorb = 3 };

struct JumpRecord {
  std::array<std::int64_t, 4> counts{};  ///< indexed by Channel
  std::int64_t net_cold_emissions = 0;
  std::int64_t total_jumps = 0;

  friend bool operator==(const JumpRecord&, const JumpRecord&) = default;
};

struct TrajectoryEstimate {
  double window = 0.0;
  std::uint64_t n_traj = 0;
  double current = 0.0;
  double current_stderr = 0.0;
  double variance = 0.0;
  Statistic fano;
  Statistic fano_stderr;  ///< batch means; needs n_traj >= 4
  double activity = 0.0;
  double activity_stderr = 0.0;
  std::vector<JumpRecord> records;
};

/// Largest single rate among the four bath rates and lambda.
double max_rate(const EngineParams& p);

/// min(gamma_h, gamma_c, lambda), ignoring lambda when it is zero.
double min_rate(const EngineParams& p);

/// Spectral gap of the chi = 0 generator (distance of the runner-up
/// eigenvalue's real part from zero).
double relaxation_gap(const ValidatedParams& p, ModelKind kind);

/// Window 1e3 / min_rate after a burn-in of 30 / relaxation_gap.
TrajectoryConfig default_trajectory_config(const ValidatedParams& p, ModelKind kind,
                                           std::uint64_t n_traj, std::uint64_t seed);

/// Throws TrajectoryConfigError: n_traj < 1, burn_in outside [0, t_final),
/// Euler dt outside (0, 0.01 / max_rate], non-quantum kind.
void check_config(const ValidatedParams& p, ModelKind kind, const TrajectoryConfig& cfg);

/// Levels in trajectory order.
enum Level : int { LevelG = 0, Level0 = 1, Level1 = 2 };

/// Unnormalized no-jump amplitudes (g, 0, 1) after time t from a basis state.
std::array<std::complex<double>, 3> no_jump_amplitudes(const EngineParams& p, ModelKind kind,
                                                       Level start, double t);

/// Squared norm of no_jump_amplitudes.
double survival(const EngineParams& p, ModelKind kind, Level start, double t);

/// One trajectory, reproducible from (cfg.seed, index).
JumpRecord simulate_one(const ValidatedParams& p, ModelKind kind, const TrajectoryConfig& cfg,
                        std::uint64_t index);

TrajectoryEstimate run(const ValidatedParams& p, ModelKind kind, const TrajectoryConfig& cfg);

/// seed_index, window, hot_emit, hot_absorb, cold_emit, cold_absorb, net_cold, total
void write_records_csv(std::ostream& out, const TrajectoryEstimate& est);

}  // namespace maserkur
