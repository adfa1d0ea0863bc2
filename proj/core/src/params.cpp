#include "stackmfg/params.hpp"

#include <cmath>
#include <sstream>

#include "stackmfg/errors.hpp"

namespace stackmfg {

std::string DistSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Deterministic: os << "det:" << a; break;
    case Kind::Uniform: os << "uniform:" << a << ":" << b; break;
    case Kind::Gaussian: os << "gaussian:" << a << ":" << b; break;
  }
  return os.str();
}

DistSpec DistSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') { parts.push_back(cur); cur.clear(); }
    else cur.push_back(c);
  }
  parts.push_back(cur);

  auto num = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try { v = std::stod(s, &pos); } catch (...) { pos = 0; }
    if (pos != s.size() || s.empty())
      throw ConfigError("distribution spec '" + text + "': '" + s + "' is not a number");
    return v;
  };

  if (parts[0] == "det" && parts.size() == 2) return det(num(parts[1]));
  if (parts[0] == "uniform" && parts.size() == 3) return uniform(num(parts[1]), num(parts[2]));
  if (parts[0] == "gaussian" && parts.size() == 3) return gaussian(num(parts[1]), num(parts[2]));
  throw ConfigError("unrecognized distribution spec '" + text +
                    "' (expected det:v | uniform:a:b | gaussian:mean:var)");
}

bool ValidationReport::contains(const std::string& needle) const {
  for (const auto& v : violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += v;
  }
  return s;
}

ValidationReport validate(const ModelParams& p, PopulationSize pop) {
  ValidationReport r;
  auto require = [&](bool cond, const std::string& name) {
    if (!cond) r.violations.push_back(name + " violated");
  };

  // standing positivity / semidefiniteness assumptions
  require(p.R > 0.0, "R > 0");
  require(p.R0 > 0.0, "R0 > 0");
  require(p.Q >= 0.0, "Q >= 0");
  require(p.Q0 >= 0.0, "Q0 >= 0");
  require(p.H >= 0.0, "H >= 0");
  require(p.H0 >= 0.0, "H0 >= 0");
  require(p.T > 0.0, "T > 0");

  // well-posedness of the follower Riccati pair
  if (pop.is_limit()) {
    require(1.0 - p.Gamma >= 0.0, "1 - Gamma >= 0");
  } else {
    const double c = pop.shrink(p.Gamma);
    require(c >= 0.0, "1 - Gamma/N >= 0");
    require(c * (1.0 - p.Gamma) >= 0.0, "(1 - Gamma/N)(1 - Gamma) >= 0");
  }

  // finite second moment of the initial distribution
  switch (p.xi_dist.kind) {
    case DistSpec::Kind::Uniform:
      require(p.xi_dist.b >= p.xi_dist.a, "xi_dist uniform bounds ordered");
      break;
    case DistSpec::Kind::Gaussian:
      require(p.xi_dist.b >= 0.0, "xi_dist gaussian variance >= 0");
      break;
    case DistSpec::Kind::Deterministic:
      break;
  }
  if (p.xi0_spec.kind == DistSpec::Kind::Gaussian)
    require(p.xi0_spec.b >= 0.0, "xi0_spec gaussian variance >= 0");
  if (p.xi0_spec.kind == DistSpec::Kind::Uniform)
    require(p.xi0_spec.b >= p.xi0_spec.a, "xi0_spec uniform bounds ordered");

  require(std::isfinite(p.xi_bar()), "xi_bar finite");
  return r;
}

}  // namespace stackmfg
