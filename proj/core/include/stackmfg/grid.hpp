#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace stackmfg {

/// Uniform discretization of [0, T] with M steps and M+1 nodes.
/// t_0 = 0 and t_M = T exactly; interior nodes are k * (T / M).
struct TimeGrid {
  double T{1.0};
  std::size_t M{1};

  TimeGrid() = default;
  TimeGrid(double horizon, std::size_t steps) : T(horizon), M(steps) {
    assert(horizon > 0.0 && steps >= 1);
  }

  double step() const { return T / static_cast<double>(M); }

  double node(std::size_t k) const {
    if (k == M) return T;  // exact at the right endpoint
    return static_cast<double>(k) * step();
  }

  std::size_t size() const { return M + 1; }

  /// Grid over the same horizon with `factor` times as many steps.
  /// Nodes of this grid are a subset of the refined one.
  TimeGrid refined(std::size_t factor = 2) const { return TimeGrid(T, M * factor); }

  bool operator==(const TimeGrid&) const = default;
};

/// One value of type V per grid node. Evaluation between nodes is by
/// linear interpolation; at nodes it reproduces the stored value exactly.
template <typename V>
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(TimeGrid g, std::vector<V> vals) : grid_(g), values_(std::move(vals)) {
    assert(values_.size() == grid_.size());
  }
  explicit Trajectory(TimeGrid g) : grid_(g), values_(g.size()) {}

  const TimeGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  const V& at(std::size_t k) const { return values_[k]; }
  V& at(std::size_t k) { return values_[k]; }

  const std::vector<V>& values() const { return values_; }

  V eval(double t) const {
    const double h = grid_.step();
    if (t <= 0.0) return values_.front();
    if (t >= grid_.T) return values_.back();
    const double s = t / h;
    auto k = static_cast<std::size_t>(s);
    if (k >= grid_.M) return values_.back();
    const double w = s - static_cast<double>(k);
    if (w == 0.0) return values_[k];
    return values_[k] * (1.0 - w) + values_[k + 1] * w;
  }

  /// Restriction to a coarser grid whose nodes are a subset of this one.
  Trajectory<V> restrict_to(const TimeGrid& coarse) const {
    assert(grid_.M % coarse.M == 0 && grid_.T == coarse.T);
    const std::size_t stride = grid_.M / coarse.M;
    std::vector<V> out;
    out.reserve(coarse.size());
    for (std::size_t k = 0; k <= coarse.M; ++k) out.push_back(values_[k * stride]);
    return Trajectory<V>(coarse, std::move(out));
  }

 private:
  TimeGrid grid_;
  std::vector<V> values_;
};

}  // namespace stackmfg
