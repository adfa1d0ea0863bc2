#include "stackmfg/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "stackmfg/errors.hpp"

namespace stackmfg {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, int line, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try { v = std::stod(value, &pos); } catch (...) { pos = 0; }
  if (pos != value.size() || value.empty())
    throw ConfigError("line " + std::to_string(line) + ": value '" + value + "' for key '" +
                      key + "' is not numeric");
  return v;
}

std::vector<std::size_t> parse_n_list(const std::string& key, int line, const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t pos = 0;
    long long v = 0;
    try { v = std::stoll(item, &pos); } catch (...) { pos = 0; }
    if (pos != item.size() || item.empty() || v <= 0)
      throw ConfigError("line " + std::to_string(line) + ": entry '" + item + "' in key '" +
                        key + "' is not a positive integer");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty())
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' has no entries");
  return out;
}

}  // namespace

std::pair<ModelParams, SimConfig> parse_config(const std::string& text) {
  ModelParams p;
  SimConfig c;
  double T = p.T;
  std::size_t M = c.grid.M;

  using Setter = std::function<void(const std::string& key, int line, const std::string& value)>;
  std::map<std::string, Setter> setters;
  auto scalar = [&](const char* key, double* target) {
    setters[key] = [&, target](const std::string& k, int line, const std::string& v) {
      *target = parse_number(k, line, v);
    };
  };
  scalar("A0", &p.A0); scalar("B0", &p.B0); scalar("C0", &p.C0); scalar("f0", &p.f0);
  scalar("A", &p.A); scalar("B", &p.B); scalar("F", &p.F); scalar("G", &p.G);
  scalar("f", &p.f); scalar("D", &p.D);
  scalar("Q0", &p.Q0); scalar("R0", &p.R0); scalar("H0", &p.H0);
  scalar("Gamma0", &p.Gamma0); scalar("eta0", &p.eta0);
  scalar("Q", &p.Q); scalar("R", &p.R); scalar("L", &p.L); scalar("H", &p.H);
  scalar("Gamma", &p.Gamma); scalar("Gamma1", &p.Gamma1); scalar("eta", &p.eta);
  scalar("T", &T);
  setters["M"] = [&](const std::string& k, int line, const std::string& v) {
    double x = parse_number(k, line, v);
    if (x < 1 || x != static_cast<double>(static_cast<std::size_t>(x)))
      throw ConfigError("line " + std::to_string(line) + ": key 'M' must be a positive integer");
    M = static_cast<std::size_t>(x);
  };
  setters["n_paths"] = [&](const std::string& k, int line, const std::string& v) {
    double x = parse_number(k, line, v);
    if (x < 1) throw ConfigError("line " + std::to_string(line) + ": key 'n_paths' must be >= 1");
    c.n_paths = static_cast<std::size_t>(x);
  };
  setters["seed"] = [&](const std::string& k, int line, const std::string& v) {
    std::size_t pos = 0;
    unsigned long long s = 0;
    try { s = std::stoull(v, &pos); } catch (...) { pos = 0; }
    if (pos != v.size() || v.empty())
      throw ConfigError("line " + std::to_string(line) + ": value '" + v + "' for key '" + k +
                        "' is not numeric");
    c.seed = s;
  };
  setters["xi_dist"] = [&](const std::string&, int, const std::string& v) {
    p.xi_dist = DistSpec::parse(v);
  };
  setters["xi0_spec"] = [&](const std::string&, int, const std::string& v) {
    p.xi0_spec = DistSpec::parse(v);
  };
  setters["N_list"] = [&](const std::string& k, int line, const std::string& v) {
    c.N_list = parse_n_list(k, line, v);
  };

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    auto eq = raw.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + raw + "'");
    std::string key = trim(raw.substr(0, eq));
    std::string value = trim(raw.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    it->second(key, line, value);
  }

  p.T = T;
  c.grid = TimeGrid(T, M);
  return {p, c};
}

std::pair<ModelParams, SimConfig> load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ModelParams& p, const SimConfig& c) {
  std::ostringstream os;
  os.precision(17);
  auto kv = [&](const char* k, double v) { os << k << " = " << v << "\n"; };
  kv("A0", p.A0); kv("B0", p.B0); kv("C0", p.C0); kv("f0", p.f0);
  kv("A", p.A); kv("B", p.B); kv("F", p.F); kv("G", p.G); kv("f", p.f); kv("D", p.D);
  kv("Q0", p.Q0); kv("R0", p.R0); kv("H0", p.H0); kv("Gamma0", p.Gamma0); kv("eta0", p.eta0);
  kv("Q", p.Q); kv("R", p.R); kv("L", p.L); kv("H", p.H);
  kv("Gamma", p.Gamma); kv("Gamma1", p.Gamma1); kv("eta", p.eta);
  kv("T", p.T);
  os << "M = " << c.grid.M << "\n";
  os << "n_paths = " << c.n_paths << "\n";
  os << "seed = " << c.seed << "\n";
  os << "xi_dist = " << p.xi_dist.to_string() << "\n";
  os << "xi0_spec = " << p.xi0_spec.to_string() << "\n";
  os << "N_list = ";
  for (std::size_t i = 0; i < c.N_list.size(); ++i) {
    if (i) os << ",";
    os << c.N_list[i];
  }
  os << "\n";
  return os.str();
}

void save_config(const ModelParams& p, const SimConfig& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << serialize_config(p, c);
}

}  // namespace stackmfg
