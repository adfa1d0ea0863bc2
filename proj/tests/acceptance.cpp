// Acceptance suite: one self-contained check per criterion, one pass/fail
// line each on stdout. Exit code 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stackmfg/config_io.hpp"
#include "stackmfg/csv.hpp"
#include "stackmfg/population.hpp"

using namespace stackmfg;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %2d [%s]: %s (%s)\n", id, pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---- 1: closed-form oracle for the follower's own-state equation ----
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  ModelParams p;
  p.A = 0.0; p.B = 1.0; p.R = 1.0; p.Q = 0.0; p.H = 1.0; p.T = 1.0;
  const auto P = solve_P(p, TimeGrid(1.0, 1000), PopulationSize::limit());
  const double err = std::abs(P.at(0) - 0.5);
  report(1, "closed-form Riccati value at t=0", err <= 1e-8,
         "|P(0) - 0.5| = " + fmt(err) + ", " + fmt(elapsed_s(t0)) + " s");
}

// ---- 2: Pi = P + K on the reference set and randomized admissible sets ----
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  auto identity_gap = [](const ModelParams& p, const TimeGrid& g, PopulationSize pop) {
    const FollowerRiccati r = solve_follower_riccati(p, g, pop);
    double gap = 0.0;
    for (std::size_t k = 0; k <= g.M; ++k)
      gap = std::max(gap, std::abs(r.Pi.at(k) - (r.P.at(k) + r.K.at(k))));
    return gap;
  };

  const ModelParams ref;
  worst = std::max(worst, identity_gap(ref, TimeGrid(ref.T, 2000), PopulationSize::limit()));
  worst = std::max(worst, identity_gap(ref, TimeGrid(ref.T, 2000), PopulationSize::finite(100)));

  std::size_t tried = 0;
  for (std::size_t trial = 0; tried < 50; ++trial) {
    ModelParams p;
    auto u = [&](std::uint64_t slot, double lo, double hi) {
      return lo + (hi - lo) * rng::uniform(314159, trial, 0, 0, slot);
    };
    p.A = u(0, -1.5, 1.5);
    p.B = u(1, 0.3, 1.5);
    p.R = u(2, 0.5, 2.0);
    p.Q = u(3, 0.0, 2.0);
    p.H = u(4, 0.0, 2.0);
    p.Gamma = u(5, 0.0, 1.0);
    p.T = u(6, 1.0, 4.0);
    const auto pop = PopulationSize::finite(10 + trial % 90);
    if (!validate(p, pop).ok()) continue;
    ++tried;
    worst = std::max(worst, identity_gap(p, TimeGrid(p.T, 1000), pop));
  }
  report(2, "sum identity Pi = P + K (reference + 50 random sets)", worst <= 1e-8,
         "sup gap = " + fmt(worst) + ", " + fmt(elapsed_s(t0)) + " s");
}

// ---- 3: finite-population Riccati converges to the limit at rate 1/N ----
void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p;
  const TimeGrid grid(p.T, 2000);
  const double g100 = riccati_convergence_gap(p, grid, 100);
  const double g200 = riccati_convergence_gap(p, grid, 200);
  const double ratio = g200 / g100;
  report(3, "finite-N Riccati gap halves from N=100 to N=200",
         ratio >= 0.3 && ratio <= 0.7,
         "gap(200)/gap(100) = " + fmt(ratio) + ", " + fmt(elapsed_s(t0)) + " s");
}

// ---- 4: flow vs direct integration of the leader matrix equation ----
void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p;
  const TimeGrid grid(p.T, 2000);
  const LeaderDecoupling dec = solve_leader_decoupling(p, grid);

  const Trajectory<double> Pi_fine = solve_Pi(p, grid.refined(4), PopulationSize::limit());
  const Trajectory<Mat3> direct = solve_phi_direct(
      p, Pi_fine.restrict_to(grid.refined(2)), grid, PhiVariant::FlowCompatible);
  double disc = 0.0;
  for (std::size_t k = 0; k <= grid.M; ++k)
    disc = std::max(disc, detail::max_abs(dec.Phi.at(k) - direct.at(k)));

  double cond_max = 0.0;
  for (std::size_t k = 0; k <= grid.M; ++k) cond_max = std::max(cond_max, dec.beta_cond.at(k));

  const bool pass = disc <= 1e-6 && dec.residual_sup <= 1e-6 && std::isfinite(cond_max);
  report(4, "flow/direct equivalence for the decoupling function", pass,
         "two-method sup = " + fmt(disc) + ", residual sup = " + fmt(dec.residual_sup) +
             ", max cond(beta) = " + fmt(cond_max) + ", " + fmt(elapsed_s(t0)) + " s");
}

// ---- 5: terminal and boundary data are exact ----
void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p;
  const TimeGrid grid(p.T, 500);
  const FollowerRiccati r = solve_follower_riccati(p, grid, PopulationSize::limit());
  const LeaderDecoupling dec = solve_leader_decoupling(p, grid);
  const Vec3 psiT = dec.Psi.at(grid.M);
  const bool pass = r.P.at(grid.M) == p.H && r.K.at(grid.M) == 0.0 && r.Pi.at(grid.M) == p.H &&
                    dec.Phi.at(grid.M).isZero(0.0) && dec.alpha.at(grid.M).isZero(0.0) &&
                    dec.beta.at(grid.M) == Mat3::Identity() && psiT(0) == p.xi0_mean() &&
                    psiT(1) == 0.0 && psiT(2) == 0.0;
  report(5, "terminal data exact for P, K, Pi, Phi, alpha, beta, Psi", pass,
         fmt(elapsed_s(t0)) + " s");
}

// ---- 6: epsilon(N) decays like 1/sqrt(N) at desk scale ----
void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p;
  SimConfig c;
  c.grid = TimeGrid(p.T, 1000);
  c.n_paths = 200;
  const EpsilonSweep sweep = epsilon_sweep(p, c, {25, 100, 400});
  bool decreasing = true;
  std::string eps;
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    if (i) {
      decreasing = decreasing && sweep.rows[i].epsilon < sweep.rows[i - 1].epsilon;
      eps += ", ";
    }
    eps += fmt(sweep.rows[i].epsilon);
  }
  const bool pass =
      sweep.slope_defined && sweep.slope >= -0.65 && sweep.slope <= -0.35 && decreasing;
  report(6, "mean-field approximation rate over N = 25, 100, 400", pass,
         "slope = " + fmt(sweep.slope) + ", eps = [" + eps + "], " + fmt(elapsed_s(t0)) + " s");
}

// ---- 7: perturbation gaps around the decentralized pair ----
void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p;
  SimConfig c;
  c.grid = TimeGrid(p.T, 1000);
  c.n_paths = 200;
  const SolvedModel model = solve_model(p, c);
  const auto dirs = make_random_directions(c.grid, 5, rng::mix64(c.seed ^ 0xd17ec7ULL));

  bool zero_exact = true, symmetric = true;
  double min_gap_50 = 0.0, min_gap_200 = 0.0;
  for (std::size_t N : {std::size_t{50}, std::size_t{200}}) {
    auto [ens, rep] = simulate_ensemble(model, c, N);
    double min_gap = 1e300;
    for (auto target : {PerturbationSpec::Target::Follower, PerturbationSpec::Target::Leader}) {
      for (std::size_t d = 0; d < dirs.size(); ++d) {
        const PerturbationSpec spec{target, dirs[d], {0.0, 0.25, -0.25, 0.5, -0.5}, d};
        const auto recs = perturbation_gap(model, c, ens, spec);
        zero_exact = zero_exact && recs[0].gap == 0.0;
        symmetric = symmetric && recs[1].gap + recs[2].gap >= -1e-9 &&
                    recs[3].gap + recs[4].gap >= -1e-9;
        for (std::size_t i = 1; i < recs.size(); ++i) min_gap = std::min(min_gap, recs[i].gap);
      }
    }
    (N == 50 ? min_gap_50 : min_gap_200) = min_gap;
  }
  const bool floor_shrinks = min_gap_200 >= 0.8 * min_gap_50;
  report(7, "equilibrium perturbation gaps at N = 50 and N = 200",
         zero_exact && symmetric && floor_shrinks,
         std::string("gap(0) exact = ") + (zero_exact ? "yes" : "no") +
             ", symmetrized >= -1e-9 = " + (symmetric ? "yes" : "no") +
             ", min gap 50 = " + fmt(min_gap_50) + ", min gap 200 = " + fmt(min_gap_200) + ", " +
             fmt(elapsed_s(t0)) + " s");
}

// ---- 8: stationarity residuals along simulated trajectories ----
void criterion_8() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p;
  SimConfig c;
  c.grid = TimeGrid(p.T, 1000);
  c.n_paths = 200;
  auto [ens, rep] = simulate_ensemble(p, c, 100);
  report(8, "first-order conditions hold along simulated paths",
         rep.stationarity_sup <= 1e-10,
         "sup residual = " + fmt(rep.stationarity_sup) + ", " + fmt(elapsed_s(t0)) + " s");
}

// ---- 9: determinism of the sweep command, independent of worker count ----
void criterion_9() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path base = fs::temp_directory_path() / "stackmfg_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path cfg = base / "config.txt";
  {
    ModelParams p;
    SimConfig c;
    c.grid = TimeGrid(p.T, 1000);
    c.n_paths = 200;
    save_config(p, c, cfg.string());
  }
  auto run = [&](const std::string& out) {
    const std::string cmd = std::string(STACKMFG_CLI_PATH) + " sweep --config " + cfg.string() +
                            " --out " + (base / out).string() + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  const bool ran = run("a") == 0 && run("b") == 0;
  bool identical = false, hashes_match = false;
  if (ran) {
    identical = fnv1a64_file(base / "a" / "epsilon.csv") ==
                fnv1a64_file(base / "b" / "epsilon.csv");
    auto hash_line = [&](const fs::path& m) {
      std::ifstream in(m);
      std::string line;
      while (std::getline(in, line))
        if (line.rfind("hash.epsilon.csv=", 0) == 0) return line;
      return std::string();
    };
    const std::string ha = hash_line(base / "a" / "manifest.txt");
    hashes_match = !ha.empty() && ha == hash_line(base / "b" / "manifest.txt");
  }

  // worker-count independence of the underlying reductions
  const ModelParams p;
  SimConfig c;
  c.grid = TimeGrid(p.T, 500);
  c.n_paths = 50;
  const SolvedModel model = solve_model(p, c);
  auto [e1, r1] = simulate_ensemble(model, c, 25, {.n_threads = 1});
  auto [e2, r2] = simulate_ensemble(model, c, 25, {.n_threads = 8});
  const bool thread_invariant = r1.epsilon_N == r2.epsilon_N && r1.J0.value == r2.J0.value &&
                                r1.Ji_mean.value == r2.Ji_mean.value;

  report(9, "sweep output is byte-identical across reruns and worker counts",
         ran && identical && hashes_match && thread_invariant,
         std::string("reruns identical = ") + (identical ? "yes" : "no") +
             ", manifest hashes equal = " + (hashes_match ? "yes" : "no") +
             ", thread invariant = " + (thread_invariant ? "yes" : "no") + ", " +
             fmt(elapsed_s(t0)) + " s");
}

// ---- 10: degenerate noise collapses epsilon to the discretization floor ----
void criterion_10() {
  const auto t0 = std::chrono::steady_clock::now();
  ModelParams p;
  p.D = 0.0;
  p.xi_dist = DistSpec::det(p.xi_bar());
  SimConfig c;
  c.grid = TimeGrid(p.T, 1000);
  c.n_paths = 20;
  const double bound = 10.0 * c.grid.step();
  const EpsilonSweep sweep = epsilon_sweep(p, c, {25, 100, 400});
  bool pass = true;
  double worst = 0.0;
  for (const auto& r : sweep.rows) {
    worst = std::max(worst, r.epsilon);
    pass = pass && r.epsilon <= bound;
  }
  report(10, "zero idiosyncratic noise and common initials give epsilon ~ 0", pass,
         "max epsilon = " + fmt(worst) + " vs bound " + fmt(bound) + ", " + fmt(elapsed_s(t0)) +
             " s");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d/10 criteria passed\n", failures == 0 ? "SUCCESS" : "FAILURE",
              10 - failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
