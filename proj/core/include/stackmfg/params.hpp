#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stackmfg/grid.hpp"

namespace stackmfg {

/// Scalar distribution descriptor for follower initials and the leader
/// terminal condition. Syntax in config files:
///   "det:5" | "uniform:0:10" | "gaussian:0:5"  (gaussian takes mean:variance)
struct DistSpec {
  enum class Kind { Deterministic, Uniform, Gaussian };
  Kind kind{Kind::Deterministic};
  double a{0.0};  // det: value; uniform: lower; gaussian: mean
  double b{0.0};  // uniform: upper; gaussian: variance

  double mean() const {
    switch (kind) {
      case Kind::Deterministic: return a;
      case Kind::Uniform: return 0.5 * (a + b);
      case Kind::Gaussian: return a;
    }
    return a;
  }

  static DistSpec det(double v) { return {Kind::Deterministic, v, 0.0}; }
  static DistSpec uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
  static DistSpec gaussian(double mean, double variance) { return {Kind::Gaussian, mean, variance}; }

  std::string to_string() const;
  static DistSpec parse(const std::string& text);  // throws ConfigError

  bool operator==(const DistSpec&) const = default;
};

/// All scalar constants of the game. Defaults are the reference
/// configuration used throughout the tests: every listed constant 1,
/// D = 0.05, H0 = 0, Gamma = Gamma0 = Gamma1 = 0.5, horizon T = 5,
/// followers started uniform on [0,10], leader terminal gaussian(0,5).
struct ModelParams {
  // leader dynamics
  double A0{1.0}, B0{1.0}, C0{1.0}, f0{1.0};
  // follower dynamics
  double A{1.0}, B{1.0}, F{1.0}, G{1.0}, f{1.0}, D{0.05};
  // leader cost
  double Q0{1.0}, R0{1.0}, H0{0.0}, Gamma0{0.5}, eta0{1.0};
  // follower cost
  double Q{1.0}, R{1.0}, L{1.0}, H{1.0}, Gamma{0.5}, Gamma1{0.5}, eta{1.0};
  // horizon and boundary data
  double T{5.0};
  DistSpec xi_dist{DistSpec::uniform(0.0, 10.0)};
  DistSpec xi0_spec{DistSpec::gaussian(0.0, 5.0)};

  double xi_bar() const { return xi_dist.mean(); }
  double xi0_mean() const { return xi0_spec.mean(); }

  /// G - B L / R, the coefficient coupling the leader control into the
  /// follower Hamiltonian. Zero on the default parameter set.
  double g_eff() const { return G - B * L / R; }

  bool operator==(const ModelParams&) const = default;
};

struct Tolerances {
  double riccati_residual_tol{1e-6};
  double beta_condition_max{1e12};
  double fixed_point_denominator_min{1e-10};
};

struct SimConfig {
  TimeGrid grid{5.0, 2000};
  std::size_t n_paths{200};
  std::vector<std::size_t> N_list{25, 100, 400};
  std::uint64_t seed{20240517};
  Tolerances tol{};
};

/// Population size argument: a concrete N or the mean-field limit.
struct PopulationSize {
  std::optional<std::size_t> N;  // nullopt = limit
  static PopulationSize limit() { return {std::nullopt}; }
  static PopulationSize finite(std::size_t n) { return {n}; }
  bool is_limit() const { return !N.has_value(); }

  /// 1 - Gamma/N, or 1 in the limit.
  double shrink(double gamma) const {
    return is_limit() ? 1.0 : 1.0 - gamma / static_cast<double>(*N);
  }
};

/// Named list of violated inequalities; empty means the parameter set is
/// admissible for the given population size. Validation never throws.
struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  bool contains(const std::string& needle) const;
  std::string summary() const;
};

ValidationReport validate(const ModelParams& params, PopulationSize pop);

}  // namespace stackmfg
