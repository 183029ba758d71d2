#include "riskclt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riskclt/errors.hpp"
#include "riskclt/parallel.hpp"
#include "riskclt/risk.hpp"

namespace riskclt {

SigmaSpec ModelConfig::sigma_spec() const {
  return covariance ? *covariance : SigmaSpec::identity(p);
}

std::size_t Histogram::total() const {
  std::size_t t = underflow + overflow;
  for (const auto& b : bins) t += b.count;
  return t;
}

std::vector<HistogramBin> Histogram::rows() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<HistogramBin> out;
  out.reserve(bins.size() + 2);
  out.push_back({-inf, lo, underflow});
  out.insert(out.end(), bins.begin(), bins.end());
  out.push_back({hi, inf, overflow});
  return out;
}

Histogram histogram(std::span<const double> samples, std::size_t bins, double lo,
                    double hi) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (!(lo < hi)) throw std::invalid_argument("histogram needs lo < hi");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.bins.resize(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.bins[i].left = lo + width * static_cast<double>(i);
    h.bins[i].right = i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1);
  }
  for (double x : samples) {
    if (!(x >= lo)) {
      // NaN lands here as well, keeping the counts conserved.
      ++h.underflow;
    } else if (x > hi) {
      ++h.overflow;
    } else {
      auto idx = static_cast<std::size_t>((x - lo) / width);
      idx = std::min(idx, bins - 1);
      // Guard against rounding across a bin edge.
      while (idx > 0 && x < h.bins[idx].left) --idx;
      while (idx + 1 < bins && x >= h.bins[idx + 1].left) ++idx;
      ++h.bins[idx].count;
    }
  }
  return h;
}

double ks_statistic(std::span<const double> sorted_samples) {
  if (sorted_samples.empty()) throw std::invalid_argument("ks_statistic needs samples");
  const double m = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
    const double f = normal_cdf(sorted_samples[i]);
    const double above = static_cast<double>(i + 1) / m - f;
    const double below = f - static_cast<double>(i) / m;
    d = std::max({d, above, below});
  }
  return d;
}

double cover_rate(std::span<const double> risks, std::span<const Interval> intervals) {
  if (risks.size() != intervals.size()) {
    throw std::invalid_argument("risks and intervals differ in length");
  }
  if (risks.empty()) return 0.0;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < risks.size(); ++i) {
    if (intervals[i].contains(risks[i])) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(risks.size());
}

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

CltParams experiment_params(const ExperimentConfig& cfg) {
  const ModelConfig& m = cfg.model;
  if (m.n < 1 || m.p < 1) throw std::invalid_argument("need n >= 1 and p >= 1");
  if (cfg.reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  const bool under = is_underparametrized(cfg.theorem);
  if (cfg.theorem == Theorem::t3 && m.beta.kind != BetaKind::fixed) {
    throw std::invalid_argument("theorem t3 requires a fixed beta");
  }
  if ((cfg.theorem == Theorem::t4 || cfg.theorem == Theorem::t5) &&
      m.beta.kind != BetaKind::gaussian) {
    throw std::invalid_argument("theorems t4 and t5 require a Gaussian beta");
  }
  if (!under && m.covariance && m.covariance->kind() != SigmaKind::identity) {
    throw std::invalid_argument(
        "overparametrized limit theory assumes an identity covariance");
  }
  const double c_n = m.aspect_ratio();
  const double c = cfg.limit_ratio.value_or(c_n);
  return clt_params(cfg.theorem, c, c_n, static_cast<double>(m.p), m.sigma,
                    m.beta.r, m.dist.nu4());
}

double repetition_risk(const ExperimentConfig& cfg, std::size_t rep) {
  const ModelConfig& m = cfg.model;
  const SigmaSpec sigma_spec = m.sigma_spec();
  const bool identity = sigma_spec.kind() == SigmaKind::identity;
  const bool under = is_underparametrized(cfg.theorem);

  RngStream design_stream = make_stream(cfg.master_seed, rep, StreamTag::design);
  Matrix x = apply_covariance(sample_entries(m.n, m.p, m.dist, design_stream),
                              sigma_spec);

  const bool needs_draw =
      m.beta.kind == BetaKind::gaussian &&
      (cfg.theorem == Theorem::t2 ||
       (cfg.theorem == Theorem::t5 && !cfg.literal_risk_given_x));
  const bool beta_bias = m.beta.kind == BetaKind::fixed || needs_draw;
  DesignOptions options{cfg.factorization, !identity || (!under && beta_bias)};
  DesignMatrix design(std::move(x), options);
  if (!design.has_vectors() && design.rank() < m.p && (beta_bias || !identity)) {
    // Rank-deficient draw in the underparametrized regime; refactor with
    // vectors so the (nonzero) bias can be evaluated.
    design = DesignMatrix(Matrix(design.x()), {cfg.factorization, true});
  }

  std::optional<Vector> beta_draw;
  if (needs_draw) {
    RngStream beta_stream = make_stream(cfg.master_seed, rep, StreamTag::beta);
    beta_draw = sample_beta(m.beta, m.p, beta_stream);
  }
  const RiskReport report = risk_report(design, sigma_spec, m.sigma, m.beta, beta_draw);

  switch (cfg.theorem) {
    case Theorem::t1:
    case Theorem::t3:
    case Theorem::t4:
      return report.risk_given_x;
    case Theorem::t2:
      return report.risk_given_x_beta.value_or(report.risk_given_x);
    case Theorem::t5:
      return cfg.literal_risk_given_x ? report.risk_given_x
                                      : *report.risk_given_x_beta;
  }
  return report.risk_given_x;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.params = experiment_params(cfg);
  result.interval = confidence_interval(result.params, cfg.alpha, cfg.variant);

  result.risks.assign(cfg.reps, 0.0);
  parallel_for(cfg.reps, cfg.workers, [&](std::size_t rep) {
    result.risks[rep] = repetition_risk(cfg, rep);
  });

  result.stats.resize(cfg.reps);
  RunningStats acc;
  for (std::size_t i = 0; i < cfg.reps; ++i) {
    result.stats[i] = standardize(result.risks[i], result.params, cfg.variant);
    acc.add(result.stats[i]);
    if (result.interval.contains(result.risks[i])) ++result.covered;
  }
  result.mean = acc.mean();
  result.variance = acc.variance();
  result.cover_rate =
      static_cast<double>(result.covered) / static_cast<double>(cfg.reps);
  result.hist = histogram(result.stats, cfg.bins, cfg.hist_lo, cfg.hist_hi);
  std::vector<double> sorted = result.stats;
  std::sort(sorted.begin(), sorted.end());
  result.ks_distance = ks_statistic(sorted);
  return result;
}

}  // namespace riskclt
