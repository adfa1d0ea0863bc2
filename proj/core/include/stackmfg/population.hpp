#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stackmfg/limit_system.hpp"
#include "stackmfg/rng.hpp"
#include "stackmfg/strategy.hpp"

namespace stackmfg {

/// Reproducible noise source for one Monte Carlo path: the common noise
/// W0, each follower's idiosyncratic noise, follower initials and the
/// leader terminal draw. All variates are counter-indexed and can be
/// re-read in any order.
class NoiseBundle {
 public:
  NoiseBundle(std::uint64_t seed, std::size_t path_index, std::size_t N, const TimeGrid& grid,
              DistSpec xi_dist, DistSpec xi0_spec)
      : seed_(seed), path_(path_index), N_(N), grid_(grid), sqrt_h_(std::sqrt(grid.step())),
        xi_dist_(xi_dist), xi0_spec_(xi0_spec) {}

  std::uint64_t seed() const { return seed_; }
  std::size_t path_index() const { return path_; }
  std::size_t population() const { return N_; }

  /// Common-noise increment over [t_k, t_{k+1}] (variance h).
  double w0_increment(std::size_t k) const {
    return sqrt_h_ * rng::normal(seed_, path_, 0, k, kSlotIncrement);
  }
  /// Increment of follower i's own Brownian motion (i in [0, N)).
  double wi_increment(std::size_t i, std::size_t k) const {
    return sqrt_h_ * rng::normal(seed_, path_, i + 1, k, kSlotIncrement);
  }
  /// Initial state of follower i, drawn from xi_dist.
  double xi(std::size_t i) const { return draw(xi_dist_, i + 1); }
  /// Leader terminal draw from xi0_spec (its mean feeds the Psi offset).
  double xi0() const { return draw(xi0_spec_, 0); }

  std::vector<double> w0_path() const {
    std::vector<double> out(grid_.M);
    for (std::size_t k = 0; k < grid_.M; ++k) out[k] = w0_increment(k);
    return out;
  }

 private:
  static constexpr std::uint64_t kSlotIncrement = 0;
  static constexpr std::uint64_t kSlotInitial = 1;

  double draw(const DistSpec& d, std::uint64_t agent) const {
    switch (d.kind) {
      case DistSpec::Kind::Deterministic: return d.a;
      case DistSpec::Kind::Uniform:
        return d.a + (d.b - d.a) * rng::uniform(seed_, path_, agent, 0, kSlotInitial);
      case DistSpec::Kind::Gaussian:
        return d.a + std::sqrt(d.b) * rng::normal(seed_, path_, agent, 0, kSlotInitial);
    }
    return d.a;
  }

  std::uint64_t seed_;
  std::size_t path_;
  std::size_t N_;
  TimeGrid grid_;
  double sqrt_h_;
  DistSpec xi_dist_;
  DistSpec xi0_spec_;
};

NoiseBundle draw_noise(const ModelParams& params, const SimConfig& config, std::size_t N,
                       std::size_t path_index);

/// Everything that depends only on (params, grid): Riccati triple,
/// leader decoupling and the time-0 fixed point. Immutable once built;
/// shared read-only across paths.
struct SolvedModel {
  ModelParams params;
  TimeGrid grid;
  FollowerRiccati riccati;      // limit triple
  LeaderDecoupling decoupling;
  Trajectory<double> Pi;        // limit Pi on the grid
  FixedPoint0 fixed_point;
};

SolvedModel solve_model(const ModelParams& params, const SimConfig& config);

/// Per-path record kept for cost recomputation under perturbations and
/// for diagnostics. Node-indexed arrays of length M+1.
struct PathRecord {
  std::vector<double> mean;      // follower state average
  std::vector<double> xbar;      // limit mean field x_bar
  std::vector<double> x0;        // leader state (limit x0_bar)
  std::vector<double> u0;        // leader control
  std::vector<double> x_target;  // follower 0 state
  std::vector<double> u_target;  // follower 0 control
  double J0{0.0};
  double Ji_mean{0.0};
  double eps_integral{0.0};      // trapezoidal int (mean - xbar)^2 dt
  double stationarity_sup{0.0};
  std::vector<std::vector<double>> followers;  // full paths, only when requested
};

struct PopulationEnsemble {
  std::size_t N{0};
  std::vector<PathRecord> paths;
};

struct ScalarWithError {
  double value{0.0};
  double stderr_{0.0};
};

struct GapRecord {
  std::string target;        // "leader" or "follower"
  std::size_t direction_id{0};
  double delta{0.0};
  double gap{0.0};
};

struct CostReport {
  ScalarWithError J0;
  ScalarWithError Ji_mean;
  double epsilon_N{0.0};
  double epsilon_stderr{0.0};
  double stationarity_sup{0.0};
  std::size_t n_paths{0};
  std::vector<GapRecord> gaps;
};

struct EnsembleOptions {
  bool store_full_paths{false};
  std::size_t n_threads{0};  // 0 = hardware concurrency
};

/// Simulate n_paths realizations of the leader + N-follower closed loop
/// under the decentralized strategies and aggregate costs, epsilon(N)
/// and stationarity diagnostics. Deterministic for fixed (params,
/// config, N) regardless of thread count (ordered reduction).
std::pair<PopulationEnsemble, CostReport> simulate_ensemble(const SolvedModel& model,
                                                            const SimConfig& config,
                                                            std::size_t N,
                                                            const EnsembleOptions& opts = {});

std::pair<PopulationEnsemble, CostReport> simulate_ensemble(const ModelParams& params,
                                                            const SimConfig& config,
                                                            std::size_t N,
                                                            const EnsembleOptions& opts = {});

ScalarWithError cost_leader(const PopulationEnsemble& ensemble);
ScalarWithError cost_follower_mean(const PopulationEnsemble& ensemble);

/// Realized leader cost of one path: trapezoidal quadrature of
/// Q0 (x0 - Gamma0 mean - eta0)^2 + R0 u0^2 plus H0 x0(0)^2, halved.
/// All spans are node arrays of length grid.M + 1.
double leader_cost_path(const ModelParams& params, const TimeGrid& grid,
                        std::span<const double> x0, std::span<const double> mean,
                        std::span<const double> u0);

/// Realized cost of one follower: trapezoidal quadrature of
/// Q (x_i - Gamma mean - Gamma1 x0 - eta)^2 + R u_i^2 + 2 u_i L u0
/// plus H x_i(T)^2, halved. The cross term can make path costs negative.
double follower_cost_path(const ModelParams& params, const TimeGrid& grid,
                          std::span<const double> x_i, std::span<const double> mean,
                          std::span<const double> x0, std::span<const double> u_i,
                          std::span<const double> u0);

struct PerturbationSpec {
  enum class Target { Leader, Follower };
  Target target{Target::Follower};
  Trajectory<double> direction;     // piecewise constant per step, |v| <= 10
  std::vector<double> magnitudes;   // delta values
  std::size_t direction_id{0};
};

/// Common-random-number perturbation experiment: replays every baseline
/// path with the target's realized control shifted by delta * v and
/// reports gap(delta) = J_perturbed - J_baseline (expectation over
/// paths). Followers re-react to a leader shift as a response map: their
/// explicit u0 feedback shifts and so do their mean-field inputs (mean
/// field and offset recomputed under the deviated leader control). A
/// shifted follower is replayed open-loop.
std::vector<GapRecord> perturbation_gap(const SolvedModel& model, const SimConfig& config,
                                        const PopulationEnsemble& baseline,
                                        const PerturbationSpec& spec);

/// n random bounded piecewise-constant directions on the grid.
std::vector<Trajectory<double>> make_random_directions(const TimeGrid& grid, std::size_t n,
                                                       std::uint64_t seed,
                                                       std::size_t blocks = 20);

struct EpsilonRow {
  std::size_t N{0};
  double epsilon{0.0};
  double stderr_{0.0};
  std::size_t n_paths{0};
};

struct EpsilonSweep {
  std::vector<EpsilonRow> rows;
  bool slope_defined{false};
  double slope{0.0};  // least-squares slope of log eps vs log N
};

/// Runs simulate_ensemble for every N in N_list (independent seed per N)
/// and fits the log-log decay slope.
EpsilonSweep epsilon_sweep(const ModelParams& params, const SimConfig& config,
                           const std::vector<std::size_t>& N_list);

}  // namespace stackmfg
