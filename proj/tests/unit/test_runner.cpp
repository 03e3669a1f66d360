#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "nlw/multibubble.hpp"
#include "nlw/runner.hpp"

using namespace nlw;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("nlw_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

}  // namespace

TEST_SUITE("runner_cli") {

TEST_CASE("empty document gives the defaults") {
  const auto c = parse_config("");
  CHECK(c.dim == 6);
  CHECK(c.n == 4096);
  CHECK(c.r_max == 50.0);
  CHECK(c.cfl == 0.5);
}

TEST_CASE("validation and unknown keys") {
  CHECK_THROWS_AS(parse_config("[evolution]\ncfl = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nfoo = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("dim = 9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[data]\nscales = 1, 0.5\nsigns = ++\n"), ConfigError);
  try {
    parse_config("[grid\nn = 3\n");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("text form round trip") {
  const auto c = parse_config("dim = 5\nseed = 9\n[data]\nsigns = +-\nscales = 0.1, 1\n[analysis]\neps = 0.03\n");
  CHECK(c.signs == std::vector<int>{1, -1});
  const auto d = parse_config(to_text(c));
  CHECK(to_text(d) == to_text(c));
  CHECK(d.seed == 9);
  CHECK(d.eps == 0.03);
}

TEST_CASE("two-bubble document reproduces synthesize bit for bit") {
  const auto c = parse_config("[grid]\nn = 2048\n[data]\nsigns = 1,-1\nscales = 0.2,1\n");
  const auto g = make_grid(c.dim, c.n, c.r_max);
  const auto a = initial_data(c, g);
  const auto b = synthesize({{1, -1}, {0.2, 1.0}}, g);
  CHECK(a.u == b.u);
  CHECK(a.udot == b.udot);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("emit outputs") {
  const auto dir = fresh_dir("emit");
  RunRecord empty;
  empty.metadata = "{}\n";
  auto m = emit_outputs(empty, dir);
  REQUIRE(m.size() == 1);
  CHECK(m[0].path == "metadata.json");

  RunRecord full;
  full.metadata = "{\"a\": 1}\n";
  full.files = {{"series.csv", "t\n0\n"}, {"intervals.json", "[]\n"}, {"plots.gp", "plot 1\n"}};
  m = emit_outputs(full, dir);
  std::set<std::string> names;
  for (const auto& e : m) names.insert(e.path);
  CHECK(names == std::set<std::string>{"metadata.json", "series.csv", "intervals.json", "plots.gp"});
  for (const auto& e : m) CHECK(e.sha256 == sha256_hex(slurp(dir / e.path)));

  full.files["series.csv"] = "t\n1\n";
  const auto m2 = emit_outputs(full, dir);
  CHECK(slurp(dir / "series.csv") == "t\n1\n");
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.size() == 4);
  for (const auto& e : manifest)
    if (e["path"] == "series.csv") CHECK(e["sha256"] == sha256_hex("t\n1\n"));
  for (const auto& p : fs::directory_iterator(dir)) CHECK(p.path().filename().string()[0] != '.');

  CHECK_THROWS_AS(emit_outputs(full, "/proc/nlw_no_such_dir"), IoError);
}

TEST_CASE("trajectory files round trip") {
  auto c = parse_config("[grid]\nn = 256\nr_max = 20\n[evolution]\nt_end = 0.2\nrecord_stride = 5\n");
  const auto g = make_grid(c.dim, c.n, c.r_max);
  auto s = c.evolution();
  const auto tr = evolve(initial_data(c, g), s);
  const auto bytes = encode_trajectory(tr, *g);
  const auto back = decode_trajectory(bytes);
  CHECK(back.grid->same_as(*g));
  CHECK(back.traj.times == tr.times);
  CHECK(back.traj.states.back().u == tr.states.back().u);
  CHECK_THROWS(decode_trajectory(bytes.substr(0, 10)));
}

TEST_CASE("reruns are byte identical") {
  auto c = parse_config("[data]\nsigns = ++\nscales = 0.01, 1\n[reduced]\nt_end = 5\n");
  const auto a = run_reduced(c), b = run_reduced(c);
  CHECK(a.exit_code == 0);
  CHECK(a.files.at("series.csv") == b.files.at("series.csv"));
  CHECK(a.metadata == b.metadata);

  c = parse_config("[grid]\nn = 512\nr_max = 20\n[evolution]\nt_end = 0.5\n[data]\ny_amplitude = 0.001\n");
  const auto e1 = run_evolve(c), e2 = run_evolve(c);
  CHECK(e1.files.at("series.csv") == e2.files.at("series.csv"));
}

TEST_CASE("metadata carries the constants used in acceptance") {
  const auto rec = run_verify_constants(parse_config("dim = 6\n"));
  CHECK(rec.exit_code == 0);
  const auto meta = nlohmann::json::parse(rec.metadata);
  for (const char* k : {"interaction_constant", "lamW_L2_sq", "lamW_L2_sq_published", "omega_sq", "pairing_UL"})
    CHECK(meta["constants"].contains(k));
  CHECK(meta["status"] == "ok");
}

}  // TEST_SUITE
