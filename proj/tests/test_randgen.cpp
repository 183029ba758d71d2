#include <doctest.h>

#include <cmath>

#include "riskclt/randgen.hpp"

using namespace riskclt;

namespace {

struct Moments {
  double mean, var, m4, se_mean, se_var, se_m4;
};

// Raw sample moments with standard errors from the sample itself.
Moments moments(const Vector& x) {
  const double m = static_cast<double>(x.size());
  Moments r{};
  r.mean = x.mean();
  const Vector x2 = x.array().square();
  const Vector x4 = x2.array().square();
  r.var = x2.mean();
  r.m4 = x4.mean();
  const double m8 = x4.array().square().mean();
  r.se_mean = std::sqrt(r.var / m);
  r.se_var = std::sqrt((r.m4 - r.var * r.var) / m);
  r.se_m4 = std::sqrt((m8 - r.m4 * r.m4) / m);
  return r;
}

Vector draws(const EntryDistribution& d, Eigen::Index m, std::uint64_t seed) {
  auto s = make_stream(seed, 0, StreamTag::misc);
  return sample_entries(m, 1, d, s).col(0);
}

}  // namespace

TEST_CASE("fourth moments") {
  CHECK(fourth_moment(EntryDistribution::normal()) == 3.0);
  CHECK(fourth_moment(EntryDistribution::centered_gamma(4.0)) == doctest::Approx(4.5));
  CHECK(fourth_moment(EntryDistribution::scaled_student_t(6.0)) == doctest::Approx(6.0));
  CHECK(EntryDistribution::centered_gamma(4.0).gamma_scale() == doctest::Approx(0.5));
  CHECK_THROWS_WITH(EntryDistribution::from_name("cauchy", 4, 6), "unknown distribution: cauchy");
  CHECK_THROWS(EntryDistribution::scaled_student_t(4.0));
  CHECK_THROWS(EntryDistribution::centered_gamma(0.0));
}

TEST_CASE("moment oracle at 1e7 draws") {
  for (const auto& d : {EntryDistribution::normal(), EntryDistribution::centered_gamma(4.0),
                        EntryDistribution::scaled_student_t(6.0)}) {
    CAPTURE(d.name());
    const Moments mo = moments(draws(d, 10'000'000, 11));
    CHECK(std::abs(mo.mean) < 4 * mo.se_mean);
    CHECK(std::abs(mo.var - 1.0) < 4 * mo.se_var);
    CHECK(std::abs(mo.m4 - d.nu4()) < 4 * mo.se_m4);
  }
}

TEST_CASE("sample_entries examples") {
  auto s1 = make_stream(5, 0, StreamTag::design);
  auto s2 = make_stream(5, 0, StreamTag::design);
  const auto d = EntryDistribution::normal();
  CHECK(sample_entries(2, 2, d, s1) == sample_entries(2, 2, d, s2));

  const Moments g = moments(draws(EntryDistribution::centered_gamma(4.0), 100000, 2));
  CHECK(std::abs(g.mean) < 4.0 / std::sqrt(1e5));
  CHECK(std::abs(g.var - 1.0) < 4 * g.se_var);

  const Moments t = moments(draws(EntryDistribution::scaled_student_t(6.0), 100000, 3));
  CHECK(std::abs(t.m4 - 6.0) < 3 * t.se_m4);
}

TEST_CASE("apply_covariance") {
  auto s = make_stream(1, 0, StreamTag::design);
  const Matrix z = sample_entries(4, 2, EntryDistribution::normal(), s);
  CHECK(apply_covariance(z, SigmaSpec::identity(2)) == z);

  Vector d(2);
  d << 4.0, 9.0;
  const Matrix scaled = apply_covariance(z, SigmaSpec::diagonal(d));
  CHECK((scaled.col(0) - 2.0 * z.col(0)).norm() < 1e-14);
  CHECK((scaled.col(1) - 3.0 * z.col(1)).norm() < 1e-14);

  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_WITH(SigmaSpec::spd(bad), "covariance not positive definite");
  Matrix asym(2, 2);
  asym << 1.0, 0.1, 0.0, 1.0;
  CHECK_THROWS(SigmaSpec::spd(asym));
  Matrix tiny(2, 2);
  tiny << 1.0, 0.0, 0.0, -1e-13;
  CHECK(SigmaSpec::spd(tiny).min_eigenvalue() == 0.0);
}

TEST_CASE("empirical covariance converges to a random 5x5 spd matrix") {
  auto gs = make_stream(9, 0, StreamTag::misc);
  const Matrix g = sample_entries(5, 5, EntryDistribution::normal(), gs);
  const Matrix sigma = g * g.transpose() / 5.0 + Matrix::Identity(5, 5) * 0.5;
  const SigmaSpec spec = SigmaSpec::spd(sigma);
  CHECK((spec.root() * spec.root() - sigma).norm() < 1e-10 * sigma.norm());

  const Eigen::Index n = 100000;
  auto s = make_stream(9, 1, StreamTag::design);
  const Matrix x = apply_covariance(sample_entries(n, 5, EntryDistribution::normal(), s), spec);
  const Matrix emp = x.transpose() * x / static_cast<double>(n);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      // Var(x_i x_j) = S_ii S_jj + S_ij^2 for Gaussian rows
      const double se = std::sqrt((sigma(i, i) * sigma(j, j) + sigma(i, j) * sigma(i, j)) /
                                  static_cast<double>(n));
      CHECK(std::abs(emp(i, j) - sigma(i, j)) < 5 * se);
    }
}

TEST_CASE("sample_beta") {
  auto s = make_stream(1, 0, StreamTag::beta);
  Vector e1 = Vector::Zero(3);
  e1(0) = 1.0;
  const Vector b = sample_beta(BetaMode::fixed(2.0, e1), 3, s);
  CHECK(b == Vector::Unit(3, 0) * 2.0);
  const Vector ones = fixed_beta(BetaMode::fixed(1.5), 7);
  CHECK(ones.squaredNorm() == doctest::Approx(2.25).epsilon(1e-14));
  CHECK_THROWS(sample_beta(BetaMode::fixed(1.0, Vector::Ones(3)), 3, s));

  const Eigen::Index p = 100000;
  auto g = make_stream(4, 0, StreamTag::beta);
  const Vector bg = sample_beta(BetaMode::gaussian(1.0), p, g);
  CHECK(std::abs(bg.squaredNorm() - 1.0) < 5 * std::sqrt(2.0 / static_cast<double>(p)));

  auto a1 = make_stream(4, 2, StreamTag::beta);
  auto a2 = make_stream(4, 2, StreamTag::beta);
  CHECK(sample_beta(BetaMode::gaussian(2.0), 50, a1) ==
        sample_beta(BetaMode::gaussian(2.0), 50, a2));
}

TEST_CASE("sample_noise") {
  auto s = make_stream(1, 0, StreamTag::noise);
  CHECK(sample_noise(10, 0.0, s).isZero());
  auto big = make_stream(1, 1, StreamTag::noise);
  const Vector e = sample_noise(1000000, 1.0, big);
  const double mean = e.mean();
  const double var = (e.array() - mean).square().sum() / (e.size() - 1.0);
  CHECK(std::abs(var - 1.0) < 0.01);
  auto a1 = make_stream(2, 0, StreamTag::noise);
  auto a2 = make_stream(2, 0, StreamTag::noise);
  CHECK(sample_noise(20, 0.5, a1) == sample_noise(20, 0.5, a2));
  auto t = make_stream(2, 1, StreamTag::noise);
  const Vector et = sample_noise(200000, 2.0, t, EntryDistribution::scaled_student_t(6.0));
  CHECK(std::abs(et.squaredNorm() / 200000.0 - 4.0) < 0.1);
}
