#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskclt/montecarlo.hpp"
#include "riskclt/sweep.hpp"

namespace riskclt::io {

using Json = nlohmann::json;

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);
double parse_double(const std::string& text);

/// Deterministic JSON text: sorted keys, two-space indent, 17 significant
/// digits for floating-point numbers, non-finite numbers as null.
std::string dump_json(const Json& value);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text);

std::string stats_csv(const std::vector<double>& stats);
std::vector<double> read_stats_csv(const std::string& text);

std::string histogram_csv(const Histogram& hist);
/// Rebuilds the histogram, sentinel rows included.
Histogram read_histogram_csv(const std::string& text);

Json summary_json(const ExperimentResult& result);

/// Scalar summary parsed back from summary.json.
struct Summary {
  double mean = 0.0;
  double variance = 0.0;
  double ks_distance = 0.0;
  double cover_rate = 0.0;
  std::size_t reps = 0;
  CltParams params;
  Interval interval;
};
Summary read_summary_json(const std::string& text);

std::string band_csv(const DescentBand& band);
DescentBand read_band_csv(const std::string& text);

std::string pairs_csv(const std::vector<HurtPair>& pairs);
std::vector<HurtPair> read_pairs_csv(const std::string& text);

/// Long format (n, risk, density).
std::string density_surface_csv(const DescentBand& band, const std::vector<double>& grid,
                                const Matrix& density);

std::string mp_density_csv(double c, std::size_t steps);

}  // namespace riskclt::io
