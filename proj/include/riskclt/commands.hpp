#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace riskclt::cli {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Invalid or inconsistent flags; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// One output file, held in memory until every artifact has been computed.
struct Artifact {
  std::string name;
  std::string content;
};

struct CltOptions {
  std::string theorem = "t1";
  std::optional<std::string> regime;
  std::size_t p = 0;
  std::optional<double> c;
  std::optional<std::size_t> n;
  double sigma = 1.0;
  double r = 1.0;
  std::string dist = "normal";
  double gamma_shape = 4.0;
  double t_df = 6.0;
  /// Defaults to fixed for t3 and gaussian otherwise.
  std::optional<std::string> beta;
  std::size_t reps = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::string variant = "practical";
  bool literal_rx = false;
  std::size_t bins = 40;
  unsigned workers = 1;
};

struct BandOptions {
  std::size_t p = 0;
  std::size_t n_min = 1;
  std::optional<std::size_t> n_max;
  double sigma = 1.0;
  double r = 1.0;
  double alpha = 0.05;
  std::string risk = "rxb";
  std::string beta = "gaussian";
  std::string dist = "normal";
  double gamma_shape = 4.0;
  double t_df = 6.0;
  double grid_lo = 0.0;
  double grid_hi = 4.0;
  std::size_t grid_steps = 201;
  std::uint64_t seed = 1;
  /// Repetitions for the empirical overlay; 0 disables it.
  std::size_t mc_reps = 0;
  unsigned workers = 1;
};

struct MpOptions {
  double c = 0.0;
  std::size_t steps = 1000;
};

struct RiskOptions {
  std::size_t n = 0;
  std::size_t p = 0;
  double sigma = 1.0;
  double r = 1.0;
  std::string dist = "normal";
  double gamma_shape = 4.0;
  double t_df = 6.0;
  std::string beta = "gaussian";
  std::uint64_t seed = 1;
  std::size_t oracle = 0;
  std::size_t oracle_noise = 200;
};

nlohmann::json to_json(const CltOptions& o);
nlohmann::json to_json(const BandOptions& o);
nlohmann::json to_json(const MpOptions& o);
nlohmann::json to_json(const RiskOptions& o);

std::vector<Artifact> cmd_clt(const CltOptions& o);
std::vector<Artifact> cmd_band(const BandOptions& o);
std::vector<Artifact> cmd_mp(const MpOptions& o);
std::vector<Artifact> cmd_risk(const RiskOptions& o);

/// Re-runs the command recorded in a manifest.json.
std::vector<Artifact> replay(const nlohmann::json& manifest);

void write_artifacts(const std::filesystem::path& dir,
                     const std::vector<Artifact>& artifacts);

/// Full command-line entry point; returns the process exit code
/// (0 success, 2 usage error, 3 numeric or regime error, 1 other failure).
int run(int argc, char** argv);

}  // namespace riskclt::cli
