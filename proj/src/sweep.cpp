#include "riskclt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskclt {

Theorem select_theorem(double c_n, const BandModel& model) {
  if (c_n < 1.0) {
    return model.risk == RiskType::given_x ? Theorem::t1 : Theorem::t2;
  }
  if (model.beta == BetaKind::fixed) return Theorem::t3;
  return model.risk == RiskType::given_x ? Theorem::t4 : Theorem::t5;
}

DescentBand double_descent_band(std::size_t p, std::span<const std::size_t> n_values,
                                const BandModel& model, double alpha) {
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  DescentBand band;
  band.p = p;
  band.alpha = alpha;
  std::vector<std::size_t> ns(n_values.begin(), n_values.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  const double pd = static_cast<double>(p);
  for (std::size_t n : ns) {
    if (n < 1) continue;
    BandRow row;
    row.n = n;
    row.c_n = pd / static_cast<double>(n);
    row.theorem = select_theorem(row.c_n, model);
    const bool under = is_underparametrized(row.theorem);
    const bool params_ok =
        (under || row.theorem == Theorem::t4) ? model.sigma > 0.0 : model.r > 0.0;
    if (std::abs(row.c_n - 1.0) >= kThresholdGuard && params_ok &&
        std::isfinite(row.c_n)) {
      const CltParams params = clt_params(row.theorem, row.c_n, row.c_n, pd,
                                          model.sigma, model.r, model.nu4);
      const Interval ci = confidence_interval(params, alpha);
      row.center = params.center;
      row.lower = ci.lower;
      row.upper = ci.upper;
      row.mean = params.center + params.mu_practical / params.rate_scale();
      row.sd = std::sqrt(params.sigma2_practical) / params.rate_scale();
      row.valid = std::isfinite(row.lower) && std::isfinite(row.upper);
    }
    band.rows.push_back(row);
  }
  return band;
}

std::vector<HurtPair> detect_more_data_hurt(const DescentBand& band) {
  std::vector<HurtPair> pairs;
  const auto& rows = band.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const BandRow& a = rows[i];
    if (!a.valid || a.n >= band.p) continue;
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const BandRow& b = rows[j];
      if (!b.valid || b.n >= band.p || b.n <= a.n) continue;
      if (b.lower > a.upper) pairs.push_back({a.n, b.n, b.lower - a.upper});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const HurtPair& x, const HurtPair& y) {
    if (x.gap != y.gap) return x.gap > y.gap;
    if (x.n1 != y.n1) return x.n1 < y.n1;
    return x.n2 < y.n2;
  });
  return pairs;
}

Matrix risk_density_surface(const DescentBand& band, std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("risk grid must be sorted");
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(band.rows.size()),
                            static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < band.rows.size(); ++i) {
    const BandRow& row = band.rows[i];
    if (!row.valid || !(row.sd > 0.0)) continue;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          normal_pdf((grid[j] - row.mean) / row.sd) / row.sd;
    }
  }
  return out;
}

Matrix risk_density_surface(std::size_t p, std::span<const std::size_t> n_values,
                            const BandModel& model, std::span<const double> grid) {
  return risk_density_surface(double_descent_band(p, n_values, model, 0.05), grid);
}

}  // namespace riskclt
