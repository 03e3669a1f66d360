#pragma once

// Scenario configuration, orchestration and reproducible outputs for the
// nlwlab command line tool.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlw/error.hpp"
#include "nlw/evolver.hpp"
#include "nlw/multibubble.hpp"

namespace nlw {

/// Malformed document, unknown key or failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure, with the offending path in the message.
class IoError : public Error {
 public:
  using Error::Error;
};

struct ScenarioConfig {
  int dim = 6;
  std::size_t n = 4096;
  double r_max = 50.0;

  double cfl = 0.5;
  double t_end = 1.0;
  int record_stride = 10;
  Boundary boundary = Boundary::DirichletHold;

  std::vector<int> signs{1};
  std::vector<double> scales{1.0};
  /// Multiple of Y^+ at the outermost bubble added to the data.
  double y_amplitude = 0.0;
  /// Free-wave packet a * bump((r - center)/width) added to u.
  double packet_amplitude = 0.0;
  double packet_center = 25.0;
  double packet_width = 12.0;

  /// Bubbles in d (0 = number of bubbles in the data).
  std::size_t N = 0;
  /// Fit window; 0 picks min(0.4 r_max, 20 lambda_K).
  double nu = 0.0;
  /// 0 picks 0.1 ||W||_E.
  double kappa1 = 0.0;
  double eps = 0.05;
  double eta = 0.2;
  double L = 10.0;
  /// lambda_{N+1} convention in d; 0 picks r_max.
  double t_conv = 0.0;
  double q_c = 0.01;
  double q_R = 10.0;
  /// Virial cutoff radius; 0 picks 5 lambda_K.
  double rho = 0.0;
  /// Cells of the reference eigen-grid (radius 40).
  std::size_t eigen_n = 16384;

  double reduced_t_end = 10.0;
  double C1 = 10.0;
  double eta0 = 0.2;
  std::vector<double> beta0;

  bool save_trajectory = false;
  std::string out = "nlw_out";
  std::uint64_t seed = 0;
  int threads = 1;

  BubbleConfig bubbles() const { return {signs, scales}; }
  EvolutionSettings evolution() const;
  /// Throws ConfigError listing every violated guard.
  void validate() const;
};

/// Sectioned "key = value" document ([grid], [evolution], [data], [analysis],
/// [reduced], [output] and top-level dim/seed). Unknown keys are rejected.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ScenarioConfig& c);

/// Data synthesized from the configuration (bubbles, Y^+ and packet).
FieldPair initial_data(const ScenarioConfig& c, GridPtr grid);

/// The in-memory result of a subcommand. Files are keyed by name.
struct RunRecord {
  std::string metadata;  // JSON text
  std::map<std::string, std::string> files;
  /// Binary trajectory, written when requested.
  std::optional<std::string> trajectory;
  int exit_code = 0;
};

struct ManifestEntry {
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

/// Writes metadata.json, every file of the record and manifest.json (listing
/// the others) into `directory`, each through a temporary file and rename.
/// Throws IoError with path context.
std::vector<ManifestEntry> emit_outputs(const RunRecord& record, const std::filesystem::path& directory);

std::string sha256_hex(const std::string& bytes);

/// %.17g CSV writer.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  CsvWriter& row(const std::vector<double>& values);
  const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Trajectory file: "NLWT" magic, version, D, n, r_max, count, then
/// (t, u[n], udot[n]) per record, little-endian doubles.
std::string encode_trajectory(const Trajectory& traj, const RadialGrid& grid);
struct DecodedTrajectory {
  GridPtr grid;
  Trajectory traj;
};
DecodedTrajectory decode_trajectory(const std::string& bytes);

/// Subcommands. Each returns a record; numerical errors are caught and
/// recorded in the metadata with exit code 3.
RunRecord run_verify_constants(const ScenarioConfig& c);
RunRecord run_eigen(const ScenarioConfig& c);
RunRecord run_evolve(const ScenarioConfig& c);
RunRecord run_collide(const ScenarioConfig& c);
RunRecord run_reduced(const ScenarioConfig& c);
RunRecord run_analyze(const ScenarioConfig& c, const DecodedTrajectory& data);

/// Library version string.
std::string version();

}  // namespace nlw
