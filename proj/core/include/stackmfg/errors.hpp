#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stackmfg {

/// Non-finite or absurdly large value during an integration sweep.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what_solver, std::size_t node)
      : std::runtime_error(what_solver + ": solution blew up at node " + std::to_string(node)),
        node_index(node) {}
  std::size_t node_index;
};

/// beta(t) in the leader flow lost invertibility (Prop-style hypothesis failed).
class BetaSingularError : public std::runtime_error {
 public:
  BetaSingularError(std::size_t node, double cond)
      : std::runtime_error("leader flow: beta condition number " + std::to_string(cond) +
                           " exceeds threshold at node " + std::to_string(node)),
        node_index(node), condition(cond) {}
  std::size_t node_index;
  double condition;
};

/// |1 - H0 * Phi11(0)| below the configured minimum.
class DegenerateFixedPointError : public std::runtime_error {
 public:
  explicit DegenerateFixedPointError(double denom)
      : std::runtime_error("time-0 fixed point is degenerate: denominator " +
                           std::to_string(denom)),
        denominator(denom) {}
  double denominator;
};

/// Config file could not be read or parsed.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stackmfg
