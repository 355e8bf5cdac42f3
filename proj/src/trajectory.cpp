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

#include "maserkur/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "maserkur/liouvillian.hpp"
#include "maserkur/parallel.hpp"
#include "maserkur/rng.hpp"

namespace maserkur {

namespace {

using Amp = std::complex<double>;

struct Jump {
  Level from;
  Level to;
  double rate;
  Channel channel;
};

// Jump operators, per-level loss rates and the driven pair of one model.
struct Structure {
  std::array<Jump, 4> jumps;
  std::array<double, 3> loss{};
  Level pair_a;
  Level pair_b;
  Level spectator;
  double lambda;

  Structure(const EngineParams& p, ModelKind kind) : lambda(p.lambda) {
    const double hot_down = p.gamma_h * (p.n_h + 1.0);
    const double hot_up = p.gamma_h * p.n_h;
    const double cold_down = p.gamma_c * (p.n_c + 1.0);
    const double cold_up = p.gamma_c * p.n_c;
    if (kind == ModelKind::QuantumI) {
      jumps = {Jump{Level1, LevelG, hot_down, HotEmit}, Jump{LevelG, Level1, hot_up, HotAbsorb},
               Jump{Level0, LevelG, cold_down, ColdEmit}, Jump{LevelG, Level0, cold_up, ColdAbsorb}};
      pair_a = Level0;
      pair_b = Level1;
      spectator = LevelG;
    } else if (kind == ModelKind::QuantumII) {
      jumps = {Jump{Level1, LevelG, hot_down, HotEmit}, Jump{LevelG, Level1, hot_up, HotAbsorb},
               Jump{Level1, Level0, cold_down, ColdEmit}, Jump{Level0, Level1, cold_up, ColdAbsorb}};
      pair_a = LevelG;
      pair_b = Level0;
      spectator = Level1;
    } else {
      throw TrajectoryConfigError("trajectories exist only for quantum kinds");
    }
    for (const auto& j : jumps) loss[j.from] += j.rate;
  }

  bool in_pair(Level l) const { return l == pair_a || l == pair_b; }
  Level partner(Level l) const { return l == pair_a ? pair_b : pair_a; }
};

// No-jump evolution of the driven pair from basis state a:
//   psi_a = C - delta S,  psi_b = -i lambda S
// with C, S the damped cos / sinc parts of exp(-i K t), K^2 = (lambda^2 - delta^2) I.
struct PairState {
  double psi_a;
  double lambda_s;  // signed; psi_b = -i lambda_s
  double norm;       // psi_a^2 + (lambda S)^2
  double norm_rate;  // d norm / dt <= 0
};

PairState pair_state(double loss_a, double loss_b, double lambda, double t) {
  const double mean = 0.25 * (loss_a + loss_b);
  const double delta = 0.25 * (loss_a - loss_b);
  const double w2 = lambda * lambda - delta * delta;
  double c, s;
  if (w2 > 0.0) {
    const double w = std::sqrt(w2);
    const double damp = std::exp(-mean * t);
    c = damp * std::cos(w * t);
    s = damp * std::sin(w * t) / w;
  } else if (w2 < 0.0) {
    const double k = std::sqrt(-w2);
    const double lead = std::exp((k - mean) * t);
    const double tail = std::exp(-2.0 * k * t);
    c = 0.5 * lead * (1.0 + tail);
    s = lead * (-std::expm1(-2.0 * k * t)) / (2.0 * k);
  } else {
    const double damp = std::exp(-mean * t);
    c = damp;
    s = t * damp;
  }
  PairState out;
  out.psi_a = c - delta * s;
  out.lambda_s = lambda * s;
  const double pa = out.psi_a * out.psi_a;
  const double pb = out.lambda_s * out.lambda_s;
  out.norm = pa + pb;
  out.norm_rate = -(loss_a * pa + loss_b * pb);
  return out;
}

constexpr double kNoJump = std::numeric_limits<double>::infinity();

// First t in (0, horizon] with norm(t) = r, or kNoJump. The norm is
// non-increasing with |d log norm / dt| <= max loss, so -log r / max_loss is
// a lower bracket.
double pair_waiting_time(double loss_a, double loss_b, double lambda, double r, double horizon) {
  const double top = std::max(loss_a, loss_b);
  if (top <= 0.0) return kNoJump;
  const double log_r = std::log(r);
  auto f = [&](double t, double& slope) {
    const PairState s = pair_state(loss_a, loss_b, lambda, t);
    if (!(s.norm > 0.0)) {
      slope = 0.0;
      return -std::numeric_limits<double>::infinity();
    }
    slope = s.norm_rate / s.norm;
    return std::log(s.norm) - log_r;
  };

  double slope = 0.0;
  double lo = -log_r / top;
  if (lo >= horizon) return f(horizon, slope) > 0.0 ? kNoJump : horizon;
  double step = lo;
  double hi = lo + step;
  for (;;) {
    if (hi >= horizon) {
      hi = horizon;
      if (f(hi, slope) > 0.0) return kNoJump;
      break;
    }
    if (f(hi, slope) <= 0.0) break;
    lo = hi;
    step *= 2.0;
    hi = lo + step;
  }

  // Safeguarded Newton on log norm inside [lo, hi].
  double t = lo;
  double ft = f(t, slope);
  for (int it = 0; it < 200; ++it) {
    double next = (slope < 0.0 && std::isfinite(ft)) ? t - ft / slope : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double moved = std::abs(next - t);
    t = next;
    ft = f(t, slope);
    if (ft > 0.0)
      lo = t;
    else
      hi = t;
    if (ft == 0.0 || moved <= 1e-14 * t || hi - lo <= 1e-14 * hi) break;
  }
  return t;
}

void check_rates(const Structure& s) {
  for (const auto& j : s.jumps)
    if (!std::isfinite(j.rate) || j.rate < 0.0)
      throw TrajectoryConfigError("non-finite jump rate");
}

// Picks a jump with weight rate * |psi_from|^2.
const Jump& pick(const Structure& s, const std::array<double, 3>& pops, double u) {
  double total = 0.0;
  for (const auto& j : s.jumps) total += j.rate * pops[j.from];
  double acc = 0.0;
  const double target = u * total;
  const Jump* last = nullptr;
  for (const auto& j : s.jumps) {
    const double w = j.rate * pops[j.from];
    if (w <= 0.0) continue;
    last = &j;
    acc += w;
    if (target < acc) return j;
  }
  if (last == nullptr) throw DegenerateError("jump with vanishing channel weights");
  return *last;
}

void record_jump(JumpRecord& rec, const Jump& j) {
  ++rec.counts[j.channel];
  ++rec.total_jumps;
  if (j.channel == ColdEmit) ++rec.net_cold_emissions;
  if (j.channel == ColdAbsorb) --rec.net_cold_emissions;
}

JumpRecord simulate_exact(const Structure& s, const TrajectoryConfig& cfg, std::uint64_t index) {
  PhiloxStream rng(cfg.seed, index);
  JumpRecord rec;
  Level level = LevelG;
  double t = 0.0;
  for (;;) {
    const double r = rng.uniform();
    const double u = rng.uniform();
    const double horizon = cfg.t_final - t;
    std::array<double, 3> pops{};
    double tau;
    if (s.in_pair(level)) {
      const Level other = s.partner(level);
      tau = pair_waiting_time(s.loss[level], s.loss[other], s.lambda, r, horizon);
      if (tau == kNoJump) break;
      const PairState ps = pair_state(s.loss[level], s.loss[other], s.lambda, tau);
      pops[level] = ps.psi_a * ps.psi_a;
      pops[other] = ps.lambda_s * ps.lambda_s;
    } else {
      if (s.loss[level] <= 0.0) break;
      tau = -std::log(r) / s.loss[level];
      if (tau > horizon) break;
      pops[level] = 1.0;
    }
    t += tau;
    const Jump& j = pick(s, pops, u);
    if (t > cfg.burn_in) record_jump(rec, j);
    level = j.to;
  }
  return rec;
}

JumpRecord simulate_euler(const Structure& s, const TrajectoryConfig& cfg, std::uint64_t index) {
  PhiloxStream rng(cfg.seed, index);
  JumpRecord rec;
  std::array<Amp, 3> psi{};
  psi[LevelG] = 1.0;
  const Amp minus_i_dt(0.0, -cfg.dt);
  double r = rng.uniform();
  const auto steps = static_cast<std::uint64_t>(std::floor(cfg.t_final / cfg.dt));
  for (std::uint64_t n = 1; n <= steps; ++n) {
    // psi <- psi - i dt H_eff psi, H_eff = lambda sigma_x(pair) - i/2 diag(loss)
    std::array<Amp, 3> h{};
    for (int k = 0; k < 3; ++k) h[k] = Amp(0.0, -0.5 * s.loss[k]) * psi[k];
    h[s.pair_a] += s.lambda * psi[s.pair_b];
    h[s.pair_b] += s.lambda * psi[s.pair_a];
    for (int k = 0; k < 3; ++k) psi[k] += minus_i_dt * h[k];
    std::array<double, 3> pops{};
    double norm = 0.0;
    for (int k = 0; k < 3; ++k) norm += pops[k] = std::norm(psi[k]);
    if (norm > r) continue;
    const Jump& j = pick(s, pops, rng.uniform());
    if (static_cast<double>(n) * cfg.dt > cfg.burn_in) record_jump(rec, j);
    psi = {};
    psi[j.to] = 1.0;
    r = rng.uniform();
  }
  return rec;
}

double euler_bound(const EngineParams& p) { return 0.01 / max_rate(p); }

}  // namespace

double max_rate(const EngineParams& p) {
  return std::max({p.gamma_h * (p.n_h + 1.0), p.gamma_h * p.n_h, p.gamma_c * (p.n_c + 1.0),
                   p.gamma_c * p.n_c, p.lambda});
}

double min_rate(const EngineParams& p) {
  const double m = std::min(p.gamma_h, p.gamma_c);
  return p.lambda > 0.0 ? std::min(m, p.lambda) : m;
}

double relaxation_gap(const ValidatedParams& p, ModelKind kind) {
  const Superoperator op = build_tilted(p, kind, 0.0);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(op.bare(), false);
  std::vector<double> re;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) re.push_back(solver.eigenvalues()(i).real());
  std::sort(re.begin(), re.end(), std::greater<>());
  const double gap = -re.at(1);
  if (!(gap > 0.0)) throw DegenerateError("generator has no relaxation gap");
  return gap;
}

TrajectoryConfig default_trajectory_config(const ValidatedParams& p, ModelKind kind,
                                           std::uint64_t n_traj, std::uint64_t seed) {
  TrajectoryConfig cfg;
  cfg.burn_in = 30.0 / relaxation_gap(p, kind);
  cfg.t_final = cfg.burn_in + 1e3 / min_rate(p);
  cfg.n_traj = n_traj;
  cfg.seed = seed;
  return cfg;
}

void check_config(const ValidatedParams& p, ModelKind kind, const TrajectoryConfig& cfg) {
  if (!is_quantum(kind)) throw TrajectoryConfigError("trajectories exist only for quantum kinds");
  if (cfg.n_traj < 1) throw TrajectoryConfigError("n_traj must be at least 1");
  if (!std::isfinite(cfg.t_final) || !(cfg.burn_in >= 0.0) || !(cfg.burn_in < cfg.t_final))
    throw TrajectoryConfigError(fmt::format(
        "empty measurement window: burn_in = {}, t_final = {}", cfg.burn_in, cfg.t_final));
  if (cfg.method == Propagator::Euler) {
    const double bound = euler_bound(p);
    if (!(cfg.dt > 0.0) || cfg.dt > bound * (1.0 + 1e-12))
      throw TrajectoryConfigError(
          fmt::format("dt = {} violates the stiffness bound 0.01 / max_rate = {}", cfg.dt, bound));
  }
}

std::array<std::complex<double>, 3> no_jump_amplitudes(const EngineParams& p, ModelKind kind,
                                                       Level start, double t) {
  const Structure s(p, kind);
  std::array<Amp, 3> out{};
  if (s.in_pair(start)) {
    const Level other = s.partner(start);
    const PairState ps = pair_state(s.loss[start], s.loss[other], s.lambda, t);
    out[start] = ps.psi_a;
    out[other] = Amp(0.0, -ps.lambda_s);
  } else {
    out[start] = std::exp(-0.5 * s.loss[start] * t);
  }
  return out;
}

double survival(const EngineParams& p, ModelKind kind, Level start, double t) {
  double n = 0.0;
  for (const auto& a : no_jump_amplitudes(p, kind, start, t)) n += std::norm(a);
  return n;
}

JumpRecord simulate_one(const ValidatedParams& p, ModelKind kind, const TrajectoryConfig& cfg,
                        std::uint64_t index) {
  TrajectoryConfig c = cfg;
  if (c.method == Propagator::Euler && c.dt == 0.0) c.dt = euler_bound(p);
  check_config(p, kind, c);
  const Structure s(p, kind);
  check_rates(s);
  return c.method == Propagator::Exact ? simulate_exact(s, c, index) : simulate_euler(s, c, index);
}

TrajectoryEstimate run(const ValidatedParams& p, ModelKind kind, const TrajectoryConfig& cfg) {
  TrajectoryConfig c = cfg;
  if (c.method == Propagator::Euler && c.dt == 0.0) c.dt = euler_bound(p);
  check_config(p, kind, c);
  const Structure s(p, kind);
  check_rates(s);

  TrajectoryEstimate est;
  est.n_traj = c.n_traj;
  est.window = c.t_final - c.burn_in;
  est.records.resize(c.n_traj);
  parallel_for(c.n_traj, c.threads, [&](std::size_t i) {
    est.records[i] = c.method == Propagator::Exact ? simulate_exact(s, c, i) : simulate_euler(s, c, i);
  });

  struct Moments {
    long double n = 0, net = 0, net2 = 0, tot = 0, tot2 = 0;
    void add(const JumpRecord& r) {
      const long double a = r.net_cold_emissions, b = r.total_jumps;
      n += 1;
      net += a;
      net2 += a * a;
      tot += b;
      tot2 += b * b;
    }
    long double mean_net() const { return net / n; }
    long double var_net() const {
      return n > 1 ? std::max(0.0L, (net2 - net * net / n) / (n - 1)) : 0.0L;
    }
    long double var_tot() const {
      return n > 1 ? std::max(0.0L, (tot2 - tot * tot / n) / (n - 1)) : 0.0L;
    }
  };
  Moments all;
  for (const auto& r : est.records) all.add(r);
  const long double T = est.window;
  est.current = static_cast<double>(all.mean_net() / T);
  est.current_stderr = static_cast<double>(std::sqrt(all.var_net() / all.n) / T);
  est.variance = static_cast<double>(all.var_net() / T);
  est.activity = static_cast<double>(all.tot / all.n / T);
  est.activity_stderr = static_cast<double>(std::sqrt(all.var_tot() / all.n) / T);
  if (all.mean_net() != 0.0L) est.fano = static_cast<double>(all.var_net() / all.mean_net());

  const std::uint64_t nb = std::min<std::uint64_t>(c.batches, c.n_traj / 2);
  if (nb >= 2 && est.fano) {
    std::vector<long double> f;
    for (std::uint64_t b = 0; b < nb; ++b) {
      Moments m;
      for (std::uint64_t i = c.n_traj * b / nb; i < c.n_traj * (b + 1) / nb; ++i)
        m.add(est.records[i]);
      if (m.mean_net() == 0.0L) {
        f.clear();
        break;
      }
      f.push_back(m.var_net() / m.mean_net());
    }
    if (!f.empty()) {
      long double mean = 0, ss = 0;
      for (auto x : f) mean += x;
      mean /= static_cast<long double>(f.size());
      for (auto x : f) ss += (x - mean) * (x - mean);
      const long double k = static_cast<long double>(f.size());
      est.fano_stderr = static_cast<double>(std::sqrt(ss / (k - 1) / k));
    }
  }
  return est;
}

void write_records_csv(std::ostream& out, const TrajectoryEstimate& est) {
  out << "seed_index,window,hot_emit,hot_absorb,cold_emit,cold_absorb,net_cold,total\n";
  for (std::size_t i = 0; i < est.records.size(); ++i) {
    const auto& r = est.records[i];
    out << fmt::format("{},{:.17g},{},{},{},{},{},{}\n", i, est.window, r.counts[HotEmit],
                       r.counts[HotAbsorb], r.counts[ColdEmit], r.counts[ColdAbsorb],
                       r.net_cold_emissions, r.total_jumps);
  }
}

}  // namespace maserkur
