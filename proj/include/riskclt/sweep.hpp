#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "riskclt/asymptotics.hpp"
#include "riskclt/estimator.hpp"
#include "riskclt/randgen.hpp"

namespace riskclt {

enum class RiskType { given_x, given_x_beta };

/// Model inputs the analytic band depends on.
struct BandModel {
  double sigma = 1.0;
  double r = 1.0;
  double nu4 = 3.0;
  BetaKind beta = BetaKind::gaussian;
  RiskType risk = RiskType::given_x_beta;
};

struct BandRow {
  std::size_t n = 0;
  double c_n = 0.0;
  /// NaN on invalid rows.
  double center = std::numeric_limits<double>::quiet_NaN();
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  bool valid = false;
  Theorem theorem = Theorem::t1;
  /// Normal approximation of the risk implied by the matching limit theorem.
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
};

/// Point-wise confidence band of the risk over n at fixed p.
struct DescentBand {
  std::size_t p = 0;
  double alpha = 0.05;
  std::vector<BandRow> rows;
};

struct HurtPair {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double gap = 0.0;
};

/// Theorem that governs the risk at aspect ratio c_n for this model.
Theorem select_theorem(double c_n, const BandModel& model);

DescentBand double_descent_band(std::size_t p, std::span<const std::size_t> n_values,
                                const BandModel& model, double alpha);

/// Every pair n1 < n2 < p of valid rows whose intervals are separated with the
/// larger sample worse, sorted by gap descending.
std::vector<HurtPair> detect_more_data_hurt(const DescentBand& band);

/// Row i holds the normal density implied by row i of the band on `grid`;
/// invalid rows are zero.
Matrix risk_density_surface(const DescentBand& band, std::span<const double> grid);

Matrix risk_density_surface(std::size_t p, std::span<const std::size_t> n_values,
                            const BandModel& model, std::span<const double> grid);

}  // namespace riskclt
