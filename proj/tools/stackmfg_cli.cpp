// Command-line front end: wires config -> solvers -> simulator and emits
// the result tables as CSV plus a flat key=value run manifest. The CLI is
// a thin shell; every number written comes from a library call.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stackmfg/config_io.hpp"
#include "stackmfg/csv.hpp"
#include "stackmfg/decoupling.hpp"
#include "stackmfg/errors.hpp"
#include "stackmfg/population.hpp"

namespace fs = std::filesystem;
using namespace stackmfg;

namespace {

constexpr const char* kVersion = "stackmfg 0.1.0";

// stable contract: 0 success, 2 validation, 3 numerical, 4 degenerate
// fixed point, 1 anything else
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitDegenerate = 4;

struct StageClock {
  std::chrono::steady_clock::time_point start{std::chrono::steady_clock::now()};
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start).count();
    start = now;
    return s;
  }
};

void echo_config(Manifest& m, const ModelParams& params, const SimConfig& config) {
  std::istringstream lines(serialize_config(params, config));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    m.set("config." + line.substr(0, eq), line.substr(eq + 3));
  }
}

struct RunContext {
  ModelParams params;
  SimConfig config;
  fs::path out;
  Manifest manifest;
};

int cmd_riccati(RunContext& ctx) {
  StageClock clock;
  const FollowerRiccati ric =
      solve_follower_riccati(ctx.params, ctx.config.grid, PopulationSize::limit());
  ctx.manifest.set("time.solve_s", clock.lap());

  double identity_gap = 0.0;
  for (std::size_t k = 0; k <= ctx.config.grid.M; ++k)
    identity_gap = std::max(identity_gap, std::abs(ric.Pi.at(k) - (ric.P.at(k) + ric.K.at(k))));
  ctx.manifest.set("riccati.pi_identity_gap", identity_gap);
  ctx.manifest.set("check.pi_identity", identity_gap <= 1e-8);
  if (identity_gap > 1e-8) {
    std::cerr << "riccati: Pi = P + K identity violated by " << identity_gap << "\n";
    return kExitNumerical;
  }

  write_riccati_csv(ctx.out / "riccati.csv", ric);
  ctx.manifest.set("time.write_s", clock.lap());
  ctx.manifest.add_file(ctx.out / "riccati.csv");
  return kExitOk;
}

int cmd_phi(RunContext& ctx) {
  StageClock clock;
  const LeaderDecoupling dec =
      solve_leader_decoupling(ctx.params, ctx.config.grid, ctx.config.tol.beta_condition_max);

  // cross-check against direct integration of the matrix equation
  const Trajectory<double> Pi_fine =
      solve_Pi(ctx.params, ctx.config.grid.refined(4), PopulationSize::limit());
  const Trajectory<Mat3> Phi_direct =
      solve_phi_direct(ctx.params, Pi_fine.restrict_to(ctx.config.grid.refined(2)),
                       ctx.config.grid, PhiVariant::FlowCompatible);
  double discrepancy = 0.0;
  for (std::size_t k = 0; k <= ctx.config.grid.M; ++k)
    discrepancy = std::max(discrepancy, detail::max_abs(dec.Phi.at(k) - Phi_direct.at(k)));

  double beta_cond_max = 0.0;
  for (std::size_t k = 0; k <= ctx.config.grid.M; ++k)
    beta_cond_max = std::max(beta_cond_max, dec.beta_cond.at(k));
  ctx.manifest.set("time.solve_s", clock.lap());

  ctx.manifest.set("phi.residual_sup", dec.residual_sup);
  ctx.manifest.set("phi.two_method_discrepancy", discrepancy);
  ctx.manifest.set("phi.beta_condition_max", beta_cond_max);
  ctx.manifest.set("phi.asymmetry_sup", phi_asymmetry_sup(dec.Phi));  // informational
  ctx.manifest.set("check.residual", dec.residual_sup <= ctx.config.tol.riccati_residual_tol);

  write_phi_csv(ctx.out / "phi.csv", dec.Phi);
  ctx.manifest.set("time.write_s", clock.lap());
  ctx.manifest.add_file(ctx.out / "phi.csv");
  return kExitOk;
}

int cmd_simulate(RunContext& ctx, std::size_t N, std::size_t limit_paths) {
  StageClock clock;
  const SolvedModel model = solve_model(ctx.params, ctx.config);
  ctx.manifest.set("time.solve_s", clock.lap());

  auto [ensemble, report] = simulate_ensemble(model, ctx.config, N);
  ctx.manifest.set("time.simulate_s", clock.lap());

  std::vector<GapRecord> gaps;
  const auto directions =
      make_random_directions(ctx.config.grid, 5, rng::mix64(ctx.config.seed ^ 0xd17ec7ULL));
  const std::vector<double> deltas{0.0, 0.25, -0.25, 0.5, -0.5};
  for (auto target : {PerturbationSpec::Target::Follower, PerturbationSpec::Target::Leader}) {
    for (std::size_t d = 0; d < directions.size(); ++d) {
      PerturbationSpec spec{target, directions[d], deltas, d};
      const auto recs = perturbation_gap(model, ctx.config, ensemble, spec);
      gaps.insert(gaps.end(), recs.begin(), recs.end());
    }
  }
  ctx.manifest.set("time.gaps_s", clock.lap());

  write_costs_csv(ctx.out / "costs.csv", {{N, report}});
  write_gaps_csv(ctx.out / "gaps.csv", gaps);
  if (limit_paths > 0) {
    std::vector<LimitState> states;
    for (std::size_t p = 0; p < std::min(limit_paths, ctx.config.n_paths); ++p) {
      const NoiseBundle noise = draw_noise(ctx.params, ctx.config, N, p);
      const auto w0 = noise.w0_path();
      states.push_back(
          simulate_limit_path(ctx.params, model.decoupling, model.Pi, model.fixed_point, w0));
    }
    write_limit_paths_csv(ctx.out / "limit_paths.csv", states);
  }
  ctx.manifest.set("time.write_s", clock.lap());

  ctx.manifest.set("simulate.N", static_cast<std::uint64_t>(N));
  ctx.manifest.set("simulate.epsilon", report.epsilon_N);
  ctx.manifest.set("simulate.epsilon_stderr", report.epsilon_stderr);
  ctx.manifest.set("simulate.J0", report.J0.value);
  ctx.manifest.set("simulate.Ji_mean", report.Ji_mean.value);
  ctx.manifest.set("simulate.stationarity_sup", report.stationarity_sup);
  ctx.manifest.set("check.stationarity", report.stationarity_sup <= 1e-10);
  double gap_zero = 0.0, gap_min = 0.0;
  for (const auto& g : gaps) {
    if (g.delta == 0.0) gap_zero = std::max(gap_zero, std::abs(g.gap));
    gap_min = std::min(gap_min, g.gap);
  }
  ctx.manifest.set("simulate.gap_at_zero", gap_zero);
  ctx.manifest.set("simulate.gap_min", gap_min);
  ctx.manifest.set("check.gap_zero", gap_zero == 0.0);

  ctx.manifest.add_file(ctx.out / "costs.csv");
  ctx.manifest.add_file(ctx.out / "gaps.csv");
  if (limit_paths > 0) ctx.manifest.add_file(ctx.out / "limit_paths.csv");
  return kExitOk;
}

int cmd_sweep(RunContext& ctx) {
  StageClock clock;
  const EpsilonSweep sweep = epsilon_sweep(ctx.params, ctx.config, ctx.config.N_list);
  ctx.manifest.set("time.simulate_s", clock.lap());

  write_epsilon_csv(ctx.out / "epsilon.csv", sweep);
  ctx.manifest.set("time.write_s", clock.lap());

  if (sweep.slope_defined) {
    ctx.manifest.set("sweep.slope", sweep.slope);
    ctx.manifest.set("check.slope", sweep.slope >= -0.65 && sweep.slope <= -0.35);
  } else {
    ctx.manifest.set("sweep.slope", std::string("n/a"));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < sweep.rows.size(); ++i)
    decreasing = decreasing && sweep.rows[i].epsilon < sweep.rows[i - 1].epsilon;
  ctx.manifest.set("sweep.epsilon_decreasing", decreasing);

  ctx.manifest.add_file(ctx.out / "epsilon.csv");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg mean-field game solver and simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::int64_t paths_override = -1;
  std::int64_t N = -1;
  std::uint64_t limit_paths = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (key = value lines)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "RNG seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--paths", paths_override, "Monte Carlo paths (overrides config)");
  };

  CLI::App* riccati = app.add_subcommand("riccati", "solve the follower Riccati triple");
  CLI::App* phi = app.add_subcommand("phi", "solve the leader decoupling function");
  CLI::App* simulate = app.add_subcommand("simulate", "simulate an N-follower population");
  CLI::App* sweep = app.add_subcommand("sweep", "epsilon(N) sweep over N_list");
  for (CLI::App* sub : {riccati, phi, simulate, sweep}) add_common(sub);
  simulate->add_option("--N", N, "population size")->required();
  simulate->add_option("--limit-paths", limit_paths, "dump the first n limit paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;  // --help exits 0, usage errors 2
  }

  RunContext ctx;
  int code = kExitOk;
  std::string error_msg;
  try {
    std::tie(ctx.params, ctx.config) = load_config(config_path);
    if (seed_set) ctx.config.seed = seed;
    if (paths_override >= 0) ctx.config.n_paths = static_cast<std::size_t>(paths_override);

    const PopulationSize pop =
        simulate->parsed() ? PopulationSize::finite(static_cast<std::size_t>(std::max<std::int64_t>(N, 0)))
                           : PopulationSize::limit();
    if (simulate->parsed() && N <= 0) {
      std::cerr << "validation failed: N must be a positive integer\n";
      return kExitValidation;
    }
    const ValidationReport report = validate(ctx.params, pop);
    if (!report.ok()) {
      std::cerr << "validation failed:\n" << report.summary();
      return kExitValidation;
    }
    if (sweep->parsed()) {
      for (std::size_t n : ctx.config.N_list) {
        const ValidationReport rn = validate(ctx.params, PopulationSize::finite(n));
        if (!rn.ok()) {
          std::cerr << "validation failed for N = " << n << ":\n" << rn.summary();
          return kExitValidation;
        }
      }
    }

    ctx.out = out_dir;
    fs::create_directories(ctx.out);
    ctx.manifest.set("tool.version", std::string(kVersion));
    ctx.manifest.set("run.command", app.get_subcommands().front()->get_name());
    echo_config(ctx.manifest, ctx.params, ctx.config);

    if (riccati->parsed()) code = cmd_riccati(ctx);
    else if (phi->parsed()) code = cmd_phi(ctx);
    else if (simulate->parsed()) code = cmd_simulate(ctx, static_cast<std::size_t>(N), limit_paths);
    else code = cmd_sweep(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DegenerateFixedPointError& e) {
    std::cerr << "degenerate fixed point: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const BlowUpError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const BetaSingularError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }

  if (code == kExitOk) {
    try {
      ctx.manifest.write(ctx.out / "manifest.txt");  // always last
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitOther;
    }
  }
  return code;
}
