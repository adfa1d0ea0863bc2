#include "stackmfg/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stackmfg {

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& file) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  const int exp10 = static_cast<int>(std::floor(std::log10(std::abs(x))));
  const int decimals = std::clamp(11 - exp10, 0, 60);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

void write_riccati_csv(const std::filesystem::path& file, const FollowerRiccati& riccati) {
  auto out = open_out(file);
  out << "t,P,K,Pi\n";
  const TimeGrid& grid = riccati.P.grid();
  for (std::size_t k = 0; k <= grid.M; ++k) {
    out << format_number(grid.node(k)) << ',' << format_number(riccati.P.at(k)) << ','
        << format_number(riccati.K.at(k)) << ',' << format_number(riccati.Pi.at(k)) << '\n';
  }
  close_checked(out, file);
}

void write_phi_csv(const std::filesystem::path& file, const Trajectory<Mat3>& Phi) {
  auto out = open_out(file);
  out << "t,phi11,phi12,phi13,phi21,phi22,phi23,phi31,phi32,phi33\n";
  const TimeGrid& grid = Phi.grid();
  for (std::size_t k = 0; k <= grid.M; ++k) {
    out << format_number(grid.node(k));
    const Mat3& m = Phi.at(k);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out << ',' << format_number(m(r, c));
    out << '\n';
  }
  close_checked(out, file);
}

void write_epsilon_csv(const std::filesystem::path& file, const EpsilonSweep& sweep) {
  auto out = open_out(file);
  out << "N,epsilon,stderr,n_paths\n";
  for (const EpsilonRow& r : sweep.rows) {
    out << r.N << ',' << format_number(r.epsilon) << ',' << format_number(r.stderr_) << ','
        << r.n_paths << '\n';
  }
  close_checked(out, file);
}

void write_costs_csv(const std::filesystem::path& file, const std::vector<CostRow>& rows) {
  auto out = open_out(file);
  out << "N,J0,J0_stderr,Ji_mean,Ji_stderr\n";
  for (const CostRow& r : rows) {
    out << r.N << ',' << format_number(r.report.J0.value) << ','
        << format_number(r.report.J0.stderr_) << ',' << format_number(r.report.Ji_mean.value)
        << ',' << format_number(r.report.Ji_mean.stderr_) << '\n';
  }
  close_checked(out, file);
}

void write_gaps_csv(const std::filesystem::path& file, const std::vector<GapRecord>& gaps) {
  auto out = open_out(file);
  out << "target,direction,delta,gap\n";
  for (const GapRecord& g : gaps) {
    out << g.target << ',' << g.direction_id << ',' << format_number(g.delta) << ','
        << format_number(g.gap) << '\n';
  }
  close_checked(out, file);
}

void write_limit_paths_csv(const std::filesystem::path& file,
                           const std::vector<LimitState>& states) {
  auto out = open_out(file);
  out << "path,t,ybar0,xbar,psibar,xbar0,ybar,phibar,zbar0,Vbar\n";
  for (std::size_t p = 0; p < states.size(); ++p) {
    const LimitState& s = states[p];
    const TimeGrid& grid = s.Y.grid();
    for (std::size_t k = 0; k <= grid.M; ++k) {
      const Vec3& Y = s.Y.at(k);
      const Vec3& X = s.X.at(k);
      const Vec3& Z = s.Z.at(k);
      out << p << ',' << format_number(grid.node(k)) << ',' << format_number(Y(0)) << ','
          << format_number(Y(1)) << ',' << format_number(Y(2)) << ',' << format_number(X(0))
          << ',' << format_number(X(1)) << ',' << format_number(X(2)) << ','
          << format_number(Z(0)) << ',' << format_number(Z(2)) << '\n';
    }
  }
  close_checked(out, file);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

void Manifest::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) { set(key, format_number(value)); }

void Manifest::set(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

void Manifest::set(const std::string& key, bool value) {
  set(key, std::string(value ? "pass" : "fail"));
}

void Manifest::add_file(const std::filesystem::path& file) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64_file(file)));
  set("hash." + file.filename().string(), std::string(buf));
}

std::string Manifest::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

void Manifest::write(const std::filesystem::path& file) const {
  auto out = open_out(file);
  out << serialize();
  close_checked(out, file);
}

}  // namespace stackmfg
