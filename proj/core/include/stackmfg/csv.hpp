#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stackmfg/decoupling.hpp"
#include "stackmfg/limit_system.hpp"
#include "stackmfg/population.hpp"
#include "stackmfg/riccati.hpp"

namespace stackmfg {

/// Fixed-point decimal with 12 significant digits (never scientific
/// notation); "-0" is normalized to "0".
std::string format_number(double x);

void write_riccati_csv(const std::filesystem::path& file, const FollowerRiccati& riccati);

void write_phi_csv(const std::filesystem::path& file, const Trajectory<Mat3>& Phi);

void write_epsilon_csv(const std::filesystem::path& file, const EpsilonSweep& sweep);

struct CostRow {
  std::size_t N{0};
  CostReport report;
};
void write_costs_csv(const std::filesystem::path& file, const std::vector<CostRow>& rows);

void write_gaps_csv(const std::filesystem::path& file, const std::vector<GapRecord>& gaps);

/// Per-path dump of the limit triple (Y, X, Z); `states[p]` is path p.
void write_limit_paths_csv(const std::filesystem::path& file,
                           const std::vector<LimitState>& states);

/// FNV-1a 64-bit hash of a byte string / of a file's exact bytes.
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& file);

/// Flat key=value run report. Keys keep insertion order; `add_file`
/// records the content hash of an already-written artifact, so the
/// manifest must be written last.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, bool value);
  void add_file(const std::filesystem::path& file);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string serialize() const;
  void write(const std::filesystem::path& file) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace stackmfg
