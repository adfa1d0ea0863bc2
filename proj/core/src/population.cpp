#include "stackmfg/population.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace stackmfg {

namespace {

double sq(double x) { return x * x; }

ScalarWithError mean_stderr(const std::vector<double>& xs) {
  ScalarWithError out;
  const auto n = static_cast<double>(xs.size());
  if (xs.empty()) return out;
  double s = 0.0;
  for (double x : xs) s += x;
  out.value = s / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += sq(x - out.value);
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

PathRecord simulate_path(const SolvedModel& m, const SimConfig& cfg, std::size_t N,
                         std::size_t path_index, bool store_full) {
  const ModelParams& p = m.params;
  const TimeGrid& grid = m.grid;
  const std::size_t M = grid.M;
  const double h = grid.step();
  const double g = p.g_eff();

  const NoiseBundle noise = draw_noise(p, cfg, N, path_index);
  const std::vector<double> w0 = noise.w0_path();
  const LimitState limit = simulate_limit_path(p, m.decoupling, m.Pi, m.fixed_point, w0);

  PathRecord rec;
  rec.mean.resize(M + 1);
  rec.xbar.resize(M + 1);
  rec.x0.resize(M + 1);
  rec.u0.resize(M + 1);
  rec.x_target.resize(M + 1);
  rec.u_target.resize(M + 1);
  if (store_full) rec.followers.assign(N, std::vector<double>(M + 1));

  std::vector<double> x(N), u(N), jint(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) x[i] = noise.xi(i);

  double eps_int = 0.0, stat_sup = 0.0;

  for (std::size_t k = 0; k <= M; ++k) {
    const double P_k = m.riccati.P.at(k);
    const double K_k = m.riccati.K.at(k);
    const double Pi_k = m.Pi.at(k);
    const Vec3& Y = limit.Y.at(k);
    const Vec3& X = limit.X.at(k);
    const double ybar0 = Y(0), xbar = Y(1), psibar = Y(2);
    const double x0 = X(0), ybar = X(1), phibar = X(2);

    const double u0 = -(p.B0 * ybar0 + g * ybar - Pi_k * g * psibar) / p.R0;

    double sum_x = 0.0;
    for (std::size_t i = 0; i < N; ++i) sum_x += x[i];  // fixed order
    const double mean = sum_x / static_cast<double>(N);

    const double w = (k == 0 || k == M) ? 0.5 : 1.0;
    eps_int += w * sq(mean - xbar);
    stat_sup = std::max(stat_sup,
                        std::abs(stationarity_residual_leader(p, Pi_k, ybar0, ybar, psibar, u0)));

    for (std::size_t i = 0; i < N; ++i) {
      u[i] = -(p.B * (P_k * x[i] + K_k * xbar + phibar) + p.L * u0) / p.R;
      jint[i] += w * (p.Q * sq(x[i] - p.Gamma * mean - p.Gamma1 * x0 - p.eta) +
                      p.R * u[i] * u[i] + 2.0 * u[i] * p.L * u0);
      stat_sup = std::max(stat_sup, std::abs(stationarity_residual_follower(
                                        p, P_k, K_k, x[i], xbar, phibar, u[i], u0)));
      if (store_full) rec.followers[i][k] = x[i];
    }

    rec.mean[k] = mean;
    rec.xbar[k] = xbar;
    rec.x0[k] = x0;
    rec.u0[k] = u0;
    rec.x_target[k] = x[0];
    rec.u_target[k] = u[0];

    detail::guard(mean, k, "simulate_path");

    if (k < M) {
      for (std::size_t i = 0; i < N; ++i) {
        x[i] += follower_drift(p, P_k, K_k, x[i], xbar, phibar, x0, u0) * h +
                p.D * noise.wi_increment(i, k);
      }
    }
  }

  double ji_sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) ji_sum += 0.5 * (h * jint[i] + p.H * sq(x[i]));
  rec.Ji_mean = ji_sum / static_cast<double>(N);
  rec.J0 = leader_cost_path(p, grid, rec.x0, rec.mean, rec.u0);
  rec.eps_integral = h * eps_int;
  rec.stationarity_sup = stat_sup;
  return rec;
}

}  // namespace

NoiseBundle draw_noise(const ModelParams& params, const SimConfig& config, std::size_t N,
                       std::size_t path_index) {
  return NoiseBundle(config.seed, path_index, N, config.grid, params.xi_dist, params.xi0_spec);
}

SolvedModel solve_model(const ModelParams& params, const SimConfig& config) {
  SolvedModel m;
  m.params = params;
  m.grid = config.grid;
  m.riccati = solve_follower_riccati(params, config.grid, PopulationSize::limit());
  m.decoupling = solve_leader_decoupling(params, config.grid, config.tol.beta_condition_max);
  m.Pi = m.riccati.Pi;
  m.fixed_point = resolve_fixed_point(m.decoupling.Phi.at(0), m.decoupling.Psi.at(0), params,
                                      config.tol.fixed_point_denominator_min);
  return m;
}

std::pair<PopulationEnsemble, CostReport> simulate_ensemble(const SolvedModel& model,
                                                            const SimConfig& config,
                                                            std::size_t N,
                                                            const EnsembleOptions& opts) {
  PopulationEnsemble ens;
  ens.N = N;
  ens.paths.resize(config.n_paths);

  std::size_t n_threads = opts.n_threads ? opts.n_threads : std::thread::hardware_concurrency();
  n_threads = std::max<std::size_t>(1, std::min(n_threads, config.n_paths));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= config.n_paths) return;
      try {
        ens.paths[idx] = simulate_path(model, config, N, idx, opts.store_full_paths);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  CostReport rep;
  rep.n_paths = config.n_paths;
  std::vector<double> j0s, jis;
  j0s.reserve(config.n_paths);
  jis.reserve(config.n_paths);
  double eps_sum = 0.0;
  std::vector<double> eps_vals;
  eps_vals.reserve(config.n_paths);
  for (const PathRecord& r : ens.paths) {  // index order: deterministic reduction
    j0s.push_back(r.J0);
    jis.push_back(r.Ji_mean);
    eps_sum += r.eps_integral;
    eps_vals.push_back(r.eps_integral);
    rep.stationarity_sup = std::max(rep.stationarity_sup, r.stationarity_sup);
  }
  rep.J0 = mean_stderr(j0s);
  rep.Ji_mean = mean_stderr(jis);
  const ScalarWithError eps_mean = mean_stderr(eps_vals);
  rep.epsilon_N = std::sqrt(std::max(0.0, eps_mean.value));
  // delta-method standard error of sqrt(mean)
  rep.epsilon_stderr = rep.epsilon_N > 0.0 ? eps_mean.stderr_ / (2.0 * rep.epsilon_N) : 0.0;
  return {std::move(ens), rep};
}

std::pair<PopulationEnsemble, CostReport> simulate_ensemble(const ModelParams& params,
                                                            const SimConfig& config,
                                                            std::size_t N,
                                                            const EnsembleOptions& opts) {
  return simulate_ensemble(solve_model(params, config), config, N, opts);
}

double leader_cost_path(const ModelParams& p, const TimeGrid& grid, std::span<const double> x0,
                        std::span<const double> mean, std::span<const double> u0) {
  double acc = 0.0;
  for (std::size_t k = 0; k <= grid.M; ++k) {
    const double w = (k == 0 || k == grid.M) ? 0.5 : 1.0;
    acc += w * (p.Q0 * sq(x0[k] - p.Gamma0 * mean[k] - p.eta0) + p.R0 * sq(u0[k]));
  }
  return 0.5 * (grid.step() * acc + p.H0 * sq(x0[0]));
}

double follower_cost_path(const ModelParams& p, const TimeGrid& grid, std::span<const double> x_i,
                          std::span<const double> mean, std::span<const double> x0,
                          std::span<const double> u_i, std::span<const double> u0) {
  double acc = 0.0;
  for (std::size_t k = 0; k <= grid.M; ++k) {
    const double w = (k == 0 || k == grid.M) ? 0.5 : 1.0;
    acc += w * (p.Q * sq(x_i[k] - p.Gamma * mean[k] - p.Gamma1 * x0[k] - p.eta) +
                p.R * sq(u_i[k]) + 2.0 * u_i[k] * p.L * u0[k]);
  }
  return 0.5 * (grid.step() * acc + p.H * sq(x_i[grid.M]));
}

ScalarWithError cost_leader(const PopulationEnsemble& ens) {
  std::vector<double> v;
  v.reserve(ens.paths.size());
  for (const auto& r : ens.paths) v.push_back(r.J0);
  return mean_stderr(v);
}

ScalarWithError cost_follower_mean(const PopulationEnsemble& ens) {
  std::vector<double> v;
  v.reserve(ens.paths.size());
  for (const auto& r : ens.paths) v.push_back(r.Ji_mean);
  return mean_stderr(v);
}

std::vector<GapRecord> perturbation_gap(const SolvedModel& model, const SimConfig& config,
                                        const PopulationEnsemble& baseline,
                                        const PerturbationSpec& spec) {
  const ModelParams& p = model.params;
  const TimeGrid& grid = model.grid;
  const std::size_t M = grid.M;
  const double h = grid.step();
  const double g = p.g_eff();
  const double b2r = p.B * p.B / p.R;
  const auto N = static_cast<double>(baseline.N);
  const auto n_paths = static_cast<double>(baseline.paths.size());

  std::vector<GapRecord> records;
  records.reserve(spec.magnitudes.size());

  for (double delta : spec.magnitudes) {
    GapRecord rec;
    rec.target = spec.target == PerturbationSpec::Target::Leader ? "leader" : "follower";
    rec.direction_id = spec.direction_id;
    rec.delta = delta;

    if (spec.target == PerturbationSpec::Target::Follower) {
      // Deterministic state shift of the perturbed follower from the
      // open-loop control shift delta * v (noise cancels under CRN).
      std::vector<double> dx(M + 1, 0.0);
      for (std::size_t k = 0; k < M; ++k)
        dx[k + 1] = dx[k] + (p.A * dx[k] + p.B * delta * spec.direction.at(k)) * h;

      const double shrink = 1.0 - p.Gamma / N;  // own contribution to the mean
      double acc = 0.0;
      for (const PathRecord& r : baseline.paths) {
        double gint = 0.0;
        for (std::size_t k = 0; k <= M; ++k) {
          const double w = (k == 0 || k == M) ? 0.5 : 1.0;
          const double arg = r.x_target[k] - p.Gamma * r.mean[k] - p.Gamma1 * r.x0[k] - p.eta;
          const double argp = arg + shrink * dx[k];
          const double up = r.u_target[k] + delta * spec.direction.at(k);
          gint += w * (p.Q * (sq(argp) - sq(arg)) + p.R * (sq(up) - sq(r.u_target[k])) +
                       2.0 * p.L * r.u0[k] * (up - r.u_target[k]));
        }
        const double xT = r.x_target[M];
        acc += 0.5 * (h * gint + p.H * (sq(xT + dx[M]) - sq(xT)));
      }
      rec.gap = acc / n_paths;
    } else {
      // Leader shift: x0 reacts through its backward equation (deterministic
      // for a deterministic direction). The followers' strategies are a
      // response map to the announced leader control, so their mean-field
      // inputs re-react as well: the offset phi_bar shifts backward, and
      // every follower (hence the mean) shifts by the same deterministic dx
      // whose feedback then acts through Pi = P + K.
      std::vector<double> dx0(M + 1, 0.0);
      for (std::size_t k = M; k-- > 0;)
        dx0[k] = dx0[k + 1] - (p.A0 * dx0[k + 1] + p.B0 * delta * spec.direction.at(k)) * h;
      std::vector<double> dphi(M + 1, 0.0);
      for (std::size_t k = M; k-- > 0;) {
        const double Pi1 = model.Pi.at(k + 1);
        dphi[k] = dphi[k + 1] + ((p.A - b2r * Pi1) * dphi[k + 1] +
                                 Pi1 * g * delta * spec.direction.at(k) +
                                 (Pi1 * p.F - p.Q * p.Gamma1) * dx0[k + 1]) * h;
      }
      std::vector<double> dx(M + 1, 0.0);
      for (std::size_t k = 0; k < M; ++k) {
        const double Pi_k = model.Pi.at(k);
        dx[k + 1] = dx[k] + ((p.A - b2r * Pi_k) * dx[k] - b2r * dphi[k] + p.F * dx0[k] +
                             g * delta * spec.direction.at(k)) * h;
      }

      double acc = 0.0;
      for (const PathRecord& r : baseline.paths) {
        double gint = 0.0;
        for (std::size_t k = 0; k <= M; ++k) {
          const double w = (k == 0 || k == M) ? 0.5 : 1.0;
          const double arg = r.x0[k] - p.Gamma0 * r.mean[k] - p.eta0;
          const double argp = arg + dx0[k] - p.Gamma0 * dx[k];
          const double u0p = r.u0[k] + delta * spec.direction.at(k);
          gint += w * (p.Q0 * (sq(argp) - sq(arg)) + p.R0 * (sq(u0p) - sq(r.u0[k])));
        }
        acc += 0.5 * (h * gint + p.H0 * (sq(r.x0[0] + dx0[0]) - sq(r.x0[0])));
      }
      rec.gap = acc / n_paths;
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<Trajectory<double>> make_random_directions(const TimeGrid& grid, std::size_t n,
                                                       std::uint64_t seed, std::size_t blocks) {
  std::vector<Trajectory<double>> out;
  out.reserve(n);
  blocks = std::max<std::size_t>(1, std::min(blocks, grid.M));
  for (std::size_t d = 0; d < n; ++d) {
    Trajectory<double> v(grid);
    for (std::size_t k = 0; k <= grid.M; ++k) {
      const std::size_t block = std::min(k * blocks / grid.M, blocks - 1);
      v.at(k) = 2.0 * rng::uniform(seed, d, block, 0, 3) - 1.0;
    }
    out.push_back(std::move(v));
  }
  return out;
}

EpsilonSweep epsilon_sweep(const ModelParams& params, const SimConfig& config,
                           const std::vector<std::size_t>& N_list) {
  const SolvedModel model = solve_model(params, config);
  EpsilonSweep sweep;
  for (std::size_t N : N_list) {
    SimConfig cfg = config;
    cfg.seed = rng::mix64(config.seed + 0x5eedULL * static_cast<std::uint64_t>(N));
    auto [ens, rep] = simulate_ensemble(model, cfg, N);
    sweep.rows.push_back({N, rep.epsilon_N, rep.epsilon_stderr, cfg.n_paths});
  }
  // least-squares slope of log eps vs log N over distinct N with eps > 0
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : sweep.rows)
    if (r.epsilon > 0.0) pts.emplace_back(std::log(static_cast<double>(r.N)), std::log(r.epsilon));
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) { sx += x; sy += y; sxx += x * x; sxy += x * y; }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    if (denom > 0.0) {
      sweep.slope = (n * sxy - sx * sy) / denom;
      sweep.slope_defined = true;
    }
  }
  return sweep;
}

}  // namespace stackmfg
