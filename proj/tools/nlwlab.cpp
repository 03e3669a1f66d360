#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "nlw/runner.hpp"

namespace {

struct Common {
  int dim = 0;
  std::string config;
  std::string out;
  long long seed = -1;
  int threads = 1;
  std::string scales;
  std::string signs;
  std::string trajectory;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--dim", c.dim, "Spatial dimension (4..8)");
  app->add_option("--config", c.config, "Scenario file (sectioned key = value)");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--seed", c.seed, "Random seed for multistart jitter");
  app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
}

nlw::ScenarioConfig resolve(const Common& o) {
  nlw::ScenarioConfig c = o.config.empty() ? nlw::parse_config("") : nlw::load_config(o.config);
  if (o.dim != 0) c.dim = o.dim;
  if (!o.out.empty()) c.out = o.out;
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  c.threads = o.threads;
  if (!o.scales.empty() || !o.signs.empty()) {
    std::string doc = "[data]\n";
    if (!o.scales.empty()) doc += "scales = " + o.scales + "\n";
    if (!o.signs.empty()) doc += "signs = " + o.signs + "\n";
    if (!o.scales.empty() && o.signs.empty()) {
      doc += "signs = ";
      for (std::size_t k = 0; k < static_cast<std::size_t>(std::count(o.scales.begin(), o.scales.end(), ',')) + 1; ++k) doc += "+";
      doc += "\n";
    }
    nlw::ScenarioConfig d;
    try {
      d = nlw::parse_config(doc);
    } catch (const nlw::ConfigError&) {
      if (o.scales.empty()) throw nlw::ConfigError("--signs needs matching --scales");
      throw;
    }
    if (!o.scales.empty()) c.scales = d.scales;
    if (!o.signs.empty()) c.signs = d.signs;
  }
  c.validate();
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nlw::IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_checks(const nlw::RunRecord& rec) {
  const auto meta = nlohmann::json::parse(rec.metadata);
  if (!meta.contains("checks")) return;
  for (const auto& c : meta["checks"])
    std::printf("%-40s %-6s value=%.12g reference=%.12g rel_err=%.3e tol=%.1e\n", c["name"].get<std::string>().c_str(),
                c["pass"].get<bool>() ? "PASS" : "FAIL", c["value"].get<double>(), c["reference"].get<double>(),
                c["rel_err"].get<double>(), c["tolerance"].get<double>());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the radial energy-critical focusing wave equation"};
  app.require_subcommand(1);
  Common opts;
  auto* verify = app.add_subcommand("verify-constants", "Check closed-form constants against quadrature");
  auto* eigen = app.add_subcommand("eigen", "Negative eigenpair of the linearized operator");
  auto* evolve = app.add_subcommand("evolve", "Evolve initial data and record energy diagnostics");
  auto* collide = app.add_subcommand("collide", "Multi-bubble run with per-snapshot modulation analysis");
  auto* reduced = app.add_subcommand("reduced", "Integrate the reduced bubble ODE");
  auto* analyze = app.add_subcommand("analyze", "Modulation analysis of a saved trajectory");
  for (auto* s : {verify, eigen, evolve, collide, reduced, analyze}) add_common(s, opts);
  for (auto* s : {evolve, collide, reduced}) {
    s->add_option("--scales", opts.scales, "Bubble scales, comma separated");
    s->add_option("--signs", opts.signs, "Bubble signs, e.g. ++ or 1,-1");
  }
  analyze->add_option("--trajectory", opts.trajectory, "Trajectory file written by evolve/collide")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const nlw::ScenarioConfig cfg = resolve(opts);
    nlw::RunRecord rec;
    if (verify->parsed()) rec = nlw::run_verify_constants(cfg);
    else if (eigen->parsed()) rec = nlw::run_eigen(cfg);
    else if (evolve->parsed()) rec = nlw::run_evolve(cfg);
    else if (collide->parsed()) rec = nlw::run_collide(cfg);
    else if (reduced->parsed()) rec = nlw::run_reduced(cfg);
    else rec = nlw::run_analyze(cfg, nlw::decode_trajectory(read_file(opts.trajectory)));
    if (verify->parsed()) print_checks(rec);
    const auto manifest = nlw::emit_outputs(rec, cfg.out);
    for (const auto& e : manifest) std::printf("%s  %s\n", e.sha256.c_str(), (cfg.out + "/" + e.path).c_str());
    return rec.exit_code;
  } catch (const nlw::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlw::ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlw::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const nlw::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
