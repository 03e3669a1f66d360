#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "nlw/cutoffs.hpp"
#include "nlw/runner.hpp"
#include "nlw/spectral.hpp"

namespace nlw {

namespace {

namespace pt = boost::property_tree;

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(x)) throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
  return static_cast<long long>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',' || ch == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split(v)) out.push_back(to_double(key, s));
  return out;
}

std::vector<int> parse_signs(const std::string& v) {
  std::vector<int> out;
  if (v.find_first_of("0123456789") == std::string::npos) {
    for (char ch : v) {
      if (ch == '+') out.push_back(1);
      else if (ch == '-') out.push_back(-1);
      else if (ch != ',' && ch != ' ') throw ConfigError("signs: unexpected character in '" + v + "'");
    }
    return out;
  }
  for (const auto& s : split(v)) {
    const long long k = to_int("signs", s);
    if (k != 1 && k != -1) throw ConfigError("signs: entries must be +-1");
    out.push_back(static_cast<int>(k));
  }
  return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"dim", [](ScenarioConfig& c, const std::string& v) { c.dim = static_cast<int>(to_int("dim", v)); }},
      {"seed", [](ScenarioConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int("seed", v)); }},
      {"grid.n", [](ScenarioConfig& c, const std::string& v) { c.n = static_cast<std::size_t>(to_int("grid.n", v)); }},
      {"grid.r_max", [](ScenarioConfig& c, const std::string& v) { c.r_max = to_double("grid.r_max", v); }},
      {"evolution.cfl", [](ScenarioConfig& c, const std::string& v) { c.cfl = to_double("evolution.cfl", v); }},
      {"evolution.t_end", [](ScenarioConfig& c, const std::string& v) { c.t_end = to_double("evolution.t_end", v); }},
      {"evolution.record_stride",
       [](ScenarioConfig& c, const std::string& v) { c.record_stride = static_cast<int>(to_int("evolution.record_stride", v)); }},
      {"evolution.boundary",
       [](ScenarioConfig& c, const std::string& v) {
         if (v == "hold") c.boundary = Boundary::DirichletHold;
         else if (v == "zero") c.boundary = Boundary::DirichletZero;
         else throw ConfigError("evolution.boundary: expected 'hold' or 'zero', got '" + v + "'");
       }},
      {"data.signs", [](ScenarioConfig& c, const std::string& v) { c.signs = parse_signs(v); }},
      {"data.scales", [](ScenarioConfig& c, const std::string& v) { c.scales = to_list("data.scales", v); }},
      {"data.y_amplitude", [](ScenarioConfig& c, const std::string& v) { c.y_amplitude = to_double("data.y_amplitude", v); }},
      {"data.packet_amplitude",
       [](ScenarioConfig& c, const std::string& v) { c.packet_amplitude = to_double("data.packet_amplitude", v); }},
      {"data.packet_center",
       [](ScenarioConfig& c, const std::string& v) { c.packet_center = to_double("data.packet_center", v); }},
      {"data.packet_width", [](ScenarioConfig& c, const std::string& v) { c.packet_width = to_double("data.packet_width", v); }},
      {"analysis.N", [](ScenarioConfig& c, const std::string& v) { c.N = static_cast<std::size_t>(to_int("analysis.N", v)); }},
      {"analysis.nu", [](ScenarioConfig& c, const std::string& v) { c.nu = to_double("analysis.nu", v); }},
      {"analysis.kappa1", [](ScenarioConfig& c, const std::string& v) { c.kappa1 = to_double("analysis.kappa1", v); }},
      {"analysis.eps", [](ScenarioConfig& c, const std::string& v) { c.eps = to_double("analysis.eps", v); }},
      {"analysis.eta", [](ScenarioConfig& c, const std::string& v) { c.eta = to_double("analysis.eta", v); }},
      {"analysis.L", [](ScenarioConfig& c, const std::string& v) { c.L = to_double("analysis.L", v); }},
      {"analysis.t_conv", [](ScenarioConfig& c, const std::string& v) { c.t_conv = to_double("analysis.t_conv", v); }},
      {"analysis.q_c", [](ScenarioConfig& c, const std::string& v) { c.q_c = to_double("analysis.q_c", v); }},
      {"analysis.q_R", [](ScenarioConfig& c, const std::string& v) { c.q_R = to_double("analysis.q_R", v); }},
      {"analysis.rho", [](ScenarioConfig& c, const std::string& v) { c.rho = to_double("analysis.rho", v); }},
      {"analysis.eigen_n",
       [](ScenarioConfig& c, const std::string& v) { c.eigen_n = static_cast<std::size_t>(to_int("analysis.eigen_n", v)); }},
      {"reduced.t_end", [](ScenarioConfig& c, const std::string& v) { c.reduced_t_end = to_double("reduced.t_end", v); }},
      {"reduced.C1", [](ScenarioConfig& c, const std::string& v) { c.C1 = to_double("reduced.C1", v); }},
      {"reduced.eta0", [](ScenarioConfig& c, const std::string& v) { c.eta0 = to_double("reduced.eta0", v); }},
      {"reduced.beta0", [](ScenarioConfig& c, const std::string& v) { c.beta0 = to_list("reduced.beta0", v); }},
      {"output.dir", [](ScenarioConfig& c, const std::string& v) { c.out = v; }},
      {"output.save_trajectory",
       [](ScenarioConfig& c, const std::string& v) { c.save_trajectory = to_bool("output.save_trajectory", v); }},
  };
  return table;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

}  // namespace

EvolutionSettings ScenarioConfig::evolution() const {
  EvolutionSettings s;
  s.cfl = cfl;
  s.t_end = t_end;
  s.boundary = boundary;
  s.record_stride = record_stride;
  return s;
}

void ScenarioConfig::validate() const {
  std::vector<std::string> bad;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  check(dim >= 4 && dim <= 8, "dim must lie in {4,...,8}");
  check(n >= 16, "grid.n must be at least 16");
  check(r_max > 0.0, "grid.r_max must be positive");
  check(cfl > 0.0 && cfl <= 1.0, "evolution.cfl must lie in (0, 1]");
  check(t_end > 0.0, "evolution.t_end must be positive");
  check(record_stride >= 1, "evolution.record_stride must be >= 1");
  check(!scales.empty() && signs.size() == scales.size(), "data.signs and data.scales must have equal nonzero length");
  for (std::size_t j = 0; j < scales.size(); ++j) {
    check(scales[j] > 0.0, "data.scales must be positive");
    if (j + 1 < scales.size()) check(scales[j] < scales[j + 1], "data.scales must increase");
  }
  check(packet_width > 0.0, "data.packet_width must be positive");
  check(N <= 4, "analysis.N must be <= 4");
  check(nu >= 0.0 && kappa1 >= 0.0 && t_conv >= 0.0 && rho >= 0.0, "analysis radii must be >= 0");
  check(eps > 0.0 && eps < eta, "analysis needs 0 < eps < eta");
  check(L > 0.0, "analysis.L must be positive");
  check(q_c > 0.0 && q_c <= 1.0 && q_R > 2.0, "analysis needs q_c in (0, 1] and q_R > 2");
  check(eigen_n >= 256, "analysis.eigen_n must be >= 256");
  check(reduced_t_end > 0.0 && C1 >= 0.0 && eta0 > 0.0, "reduced parameters must be positive");
  check(beta0.empty() || beta0.size() == scales.size(), "reduced.beta0 needs one entry per bubble");
  check(threads >= 1, "threads must be >= 1");
  if (bad.empty() && dim >= 4 && dim <= 8) {
    try {
      evolution().validate(RadialGrid(dim, n, r_max));
    } catch (const Error& e) {
      bad.push_back(e.what());
    }
  }
  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw ConfigError(msg);
  }
}

ScenarioConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  ScenarioConfig c;
  const auto& table = setters();
  auto apply = [&](const std::string& key, const std::string& value) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(c, value);
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      apply(name, node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) throw ConfigError("config key '" + name + "." + key + "' is nested too deeply");
      apply(name + "." + key, leaf.data());
    }
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "dim = " << c.dim << "\nseed = " << c.seed << "\n";
  o << "\n[grid]\nn = " << c.n << "\nr_max = " << fmt(c.r_max) << "\n";
  o << "\n[evolution]\ncfl = " << fmt(c.cfl) << "\nt_end = " << fmt(c.t_end) << "\nrecord_stride = " << c.record_stride
    << "\nboundary = " << (c.boundary == Boundary::DirichletHold ? "hold" : "zero") << "\n";
  std::string signs;
  for (std::size_t i = 0; i < c.signs.size(); ++i) signs += (i ? "," : "") + std::to_string(c.signs[i]);
  o << "\n[data]\nsigns = " << signs << "\nscales = " << join(c.scales) << "\ny_amplitude = " << fmt(c.y_amplitude)
    << "\npacket_amplitude = " << fmt(c.packet_amplitude) << "\npacket_center = " << fmt(c.packet_center)
    << "\npacket_width = " << fmt(c.packet_width) << "\n";
  o << "\n[analysis]\nN = " << c.N << "\nnu = " << fmt(c.nu) << "\nkappa1 = " << fmt(c.kappa1) << "\neps = " << fmt(c.eps)
    << "\neta = " << fmt(c.eta) << "\nL = " << fmt(c.L) << "\nt_conv = " << fmt(c.t_conv) << "\nq_c = " << fmt(c.q_c)
    << "\nq_R = " << fmt(c.q_R) << "\nrho = " << fmt(c.rho) << "\neigen_n = " << c.eigen_n << "\n";
  o << "\n[reduced]\nt_end = " << fmt(c.reduced_t_end) << "\nC1 = " << fmt(c.C1) << "\neta0 = " << fmt(c.eta0) << "\n";
  if (!c.beta0.empty()) o << "beta0 = " << join(c.beta0) << "\n";
  o << "\n[output]\ndir = " << c.out << "\nsave_trajectory = " << (c.save_trajectory ? "true" : "false") << "\n";
  return o.str();
}

FieldPair initial_data(const ScenarioConfig& c, GridPtr grid) {
  FieldPair u = synthesize(c.bubbles(), grid);
  if (c.y_amplitude != 0.0) {
    const auto eig = negative_eigenpair(make_grid(c.dim, c.eigen_n, 40.0), 1.0);
    u += c.y_amplitude * make_Y_pair(eig, Sign::Plus, grid, c.scales.back());
  }
  if (c.packet_amplitude != 0.0)
    for (std::size_t i = 0; i < grid->size(); ++i)
      u.u[i] += c.packet_amplitude * bump((grid->node(i) - c.packet_center) / c.packet_width);
  return u;
}

}  // namespace nlw
