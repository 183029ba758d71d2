#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "riskclt/asymptotics.hpp"
#include "riskclt/errors.hpp"

using namespace riskclt;

namespace {

// Integral of f against the continuous MP density by double-exponential
// quadrature; the sqrt edge singularities are what tanh-sinh handles well.
template <class F>
double mp_integral(double c, F f) {
  const MpLaw law(c);
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double x) { return f(x) * mp_density(x, c); }, law.a, law.b);
}

double z975() {
  return boost::math::quantile(boost::math::normal(), 0.975);
}

const Theorem kAll[] = {Theorem::t1, Theorem::t2, Theorem::t3, Theorem::t4, Theorem::t5};

CltParams params_for(Theorem t, double nu4 = 3.0, double p = 300.0) {
  const double c = is_underparametrized(t) ? 0.6 : 1.7;
  return clt_params(t, c, c, p, 1.3, 0.8, nu4);
}

}  // namespace

TEST_CASE("mp density examples") {
  CHECK(mp_density(0.01, 0.25) == 0.0);
  CHECK(mp_density(2.3, 0.25) == 0.0);
  CHECK(mp_density(4.0, 1.0) == 0.0);
  CHECK(mp_density(-1.0, 3.0) == 0.0);
  CHECK_THROWS(mp_density(1.0, 0.0));
  CHECK(std::abs(mp_integral(0.25, [](double) { return 1.0; }) - 1.0) < 1e-8);
}

TEST_CASE("mp mass conservation") {
  for (double c : {0.05, 0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 4.0, 10.0}) {
    CAPTURE(c);
    const MpLaw law(c);
    CHECK(law.a <= law.b);
    CHECK((law.a == 0.0) == (c == 1.0));
    CHECK(law.point_mass_at_zero == doctest::Approx(std::max(0.0, 1.0 - 1.0 / c)));
    const double mass = mp_integral(c, [](double) { return 1.0; });
    CHECK(std::abs(mass - std::min(1.0, 1.0 / c)) < 1e-8);
    CHECK(std::abs(mass + law.point_mass_at_zero - 1.0) < 1e-8);
  }
}

TEST_CASE("mp inverse moment") {
  for (double c : {0.1, 0.3, 0.5, 2.0 / 3.0, 0.8}) {
    CAPTURE(c);
    const double m = mp_integral(c, [](double x) { return 1.0 / x; });
    CHECK(std::abs(m - 1.0 / (1.0 - c)) < 1e-6);
  }
}

TEST_CASE("normal quantile accuracy") {
  boost::math::normal nd;
  for (double q : {1e-12, 1e-8, 1e-4, 0.01, 0.025, 0.2, 0.5, 0.7, 0.975, 0.999, 1 - 1e-10}) {
    CAPTURE(q);
    CHECK(std::abs(normal_quantile(q) - boost::math::quantile(nd, q)) < 1e-9);
  }
  for (double x : {-6.0, -1.0, 0.0, 0.3, 2.5}) {
    CHECK(normal_cdf(x) == doctest::Approx(boost::math::cdf(nd, x)).epsilon(1e-14));
    CHECK(normal_pdf(x) == doctest::Approx(boost::math::pdf(nd, x)).epsilon(1e-14));
  }
}

TEST_CASE("limit_risk examples") {
  CHECK(limit_risk(2.0 / 3.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(limit_risk(2.0, 1.0, 1.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(limit_risk(3.0, 0.0, 1.0) == doctest::Approx(1.0 - 1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_WITH_AS(limit_risk(1.01, 1.0, 1.0), "interpolation threshold: theory invalid",
                       RegimeError);
  CHECK_THROWS_AS(limit_risk(0.99, 1.0, 1.0), RegimeError);
}

TEST_CASE("clt_params examples") {
  const CltParams t1 = clt_params(Theorem::t1, 2.0 / 3.0, 2.0 / 3.0, 100, 1.0, 1.0, 3.0);
  CHECK(t1.mu == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(t1.sigma2 == doctest::Approx(48.0).epsilon(1e-13));
  CHECK(t1.rate == Rate::p);
  const CltParams t2 = clt_params(Theorem::t2, 2.0 / 3.0, 2.0 / 3.0, 100, 1.0, 1.0, 3.0);
  CHECK(t2.mu == t1.mu);
  CHECK(t2.sigma2 == t1.sigma2);
  CHECK(t2.center == t1.center);

  const CltParams t5 = clt_params(Theorem::t5, 2.0, 2.0, 100, 1.0, 1.0, 3.0);
  CHECK(t5.mu == 0.0);
  CHECK(t5.sigma2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t5.rate == Rate::sqrt_p);

  for (double c = 1.05; c < 8.0; c += 0.25) {
    const CltParams a = clt_params(Theorem::t3, c, c, 100, 1.0, 1.3, 3.0);
    const CltParams b = clt_params(Theorem::t5, c, c, 100, 1.0, 1.3, 3.0);
    CHECK(b.sigma2 == doctest::Approx(c * a.sigma2).epsilon(1e-13));
  }
}

TEST_CASE("clt_params against hand formulas with kurtosis") {
  const double s = 1.3, r = 0.8, p = 250.0;
  for (double nu4 : {3.0, 4.5, 6.0}) {
    const double k = nu4 - 3.0, s2 = s * s, s4 = s2 * s2, r4 = std::pow(r, 4);
    for (double c : {0.3, 0.6, 0.9}) {
      const CltParams t = clt_params(Theorem::t1, c, c, p, s, r, nu4);
      const double mu = std::pow(c / (1 - c), 2) * s2 + s2 * c * c * k / (1 - c);
      const double var = 2 * std::pow(c, 3) * s4 / std::pow(1 - c, 4) +
                         std::pow(c, 3) * s4 * k / std::pow(1 - c, 2);
      CHECK(t.mu == doctest::Approx(mu).epsilon(1e-12));
      CHECK(t.sigma2 == doctest::Approx(var).epsilon(1e-12));
      CHECK(t.center == doctest::Approx(c * s2 / (1 - c)).epsilon(1e-14));
    }
    for (double c : {1.2, 1.5, 3.0}) {
      const double mu4 = c * s2 / std::pow(1 - c, 2) + s2 * k / (c - 1);
      const double var4 = 2 * std::pow(c, 3) * s4 / std::pow(1 - c, 4) +
                          c * s4 * k / std::pow(c - 1, 2);
      const CltParams t4 = clt_params(Theorem::t4, c, c, p, s, r, nu4);
      CHECK(t4.mu == doctest::Approx(mu4).epsilon(1e-12));
      CHECK(t4.sigma2 == doctest::Approx(var4).epsilon(1e-12));
      CHECK(t4.mu_practical == t4.mu);
      CHECK(t4.sigma2_practical == t4.sigma2);
      CHECK(t4.center == doctest::Approx((1 - 1 / c) * r * r + s2 / (c - 1)).epsilon(1e-14));

      const CltParams t3 = clt_params(Theorem::t3, c, c, p, s, r, nu4);
      CHECK(t3.mu == 0.0);
      CHECK(t3.sigma2 == doctest::Approx(2 * (c - 1) / (c * c) * r4).epsilon(1e-13));
      CHECK(t3.mu_practical == doctest::Approx(mu4 / std::sqrt(p)).epsilon(1e-12));
      CHECK(t3.sigma2_practical == doctest::Approx(t3.sigma2 + var4 / p).epsilon(1e-12));

      const CltParams t5 = clt_params(Theorem::t5, c, c, p, s, r, nu4);
      CHECK(t5.sigma2 == doctest::Approx(2 * (1 - 1 / c) * r4).epsilon(1e-13));
      CHECK(t5.mu_practical == t3.mu_practical);
      CHECK(t5.sigma2_practical >= t5.sigma2);
      CHECK(t3.sigma2_practical >= t3.sigma2);
    }
  }
}

TEST_CASE("gaussian kurtosis removes the excess terms exactly") {
  const double s = 1.3, s2 = s * s, s4 = s2 * s2;
  for (double c : {0.2, 0.5, 2.0 / 3.0}) {
    const CltParams t = clt_params(Theorem::t1, c, c, 100, s, 1.0, 3.0);
    CHECK(t.mu == c * c * s2 / ((c - 1.0) * (c - 1.0)));
    CHECK(t.sigma2 == 2.0 * c * c * c * s4 / std::pow(c - 1.0, 4));
  }
  for (double c : {1.5, 2.0, 4.0}) {
    const CltParams t = clt_params(Theorem::t4, c, c, 100, s, 1.0, 3.0);
    CHECK(t.mu == c * s2 / ((1.0 - c) * (1.0 - c)));
    CHECK(t.sigma2 == 2.0 * c * c * c * s4 / std::pow(1.0 - c, 4));
  }
}

TEST_CASE("clt_params preconditions") {
  CHECK_THROWS_AS(clt_params(Theorem::t1, 1.5, 1.5, 100, 1, 1, 3), RegimeError);
  CHECK_THROWS_AS(clt_params(Theorem::t5, 0.5, 0.5, 100, 1, 1, 3), RegimeError);
  CHECK_THROWS_AS(clt_params(Theorem::t3, 1.5, 0.9, 100, 1, 1, 3), RegimeError);
  CHECK_THROWS(clt_params(Theorem::t1, 0.5, 0.5, 100, 0.0, 1, 3));
  CHECK_THROWS(clt_params(Theorem::t4, 1.5, 1.5, 100, 0.0, 1, 3));
  CHECK_THROWS(clt_params(Theorem::t5, 1.5, 1.5, 100, 1.0, 0.0, 3));
  CHECK_NOTHROW(clt_params(Theorem::t3, 1.5, 1.5, 100, 0.0, 1.0, 3));
}

TEST_CASE("confidence_interval examples") {
  const CltParams t1 = clt_params(Theorem::t1, 2.0 / 3.0, 2.0 / 3.0, 100, 1.0, 1.0, 3.0);
  const Interval ci = confidence_interval(t1, 0.05);
  const double z = z975();
  CHECK(ci.lower == doctest::Approx(2.0 + (4.0 - z * std::sqrt(48.0)) / 100.0).epsilon(1e-12));
  CHECK(ci.upper == doctest::Approx(2.0 + (4.0 + z * std::sqrt(48.0)) / 100.0).epsilon(1e-12));

  for (Theorem t : kAll) {
    const CltParams pr = params_for(t);
    const Interval narrow = confidence_interval(pr, 1.0 - 1e-12);
    CHECK(narrow.upper - narrow.lower < 1e-10);
    for (double alpha : {0.01, 0.05, 0.2}) {
      const Interval iv = confidence_interval(pr, alpha);
      CHECK(iv.lower <= iv.upper);
      const double offset = pr.center + pr.mu_practical / pr.rate_scale();
      CHECK(iv.contains(offset));
      const double z_a = boost::math::quantile(boost::math::normal(), 1 - alpha / 2);
      const double width = 2 * z_a * std::sqrt(pr.sigma2_practical) / pr.rate_scale();
      CHECK(std::abs((iv.upper - iv.lower) - width) < 1e-12);
    }
  }
}

TEST_CASE("standardize duality") {
  for (Theorem t : kAll) {
    for (double nu4 : {3.0, 6.0}) {
      for (auto variant : {ParamVariant::practical, ParamVariant::limiting}) {
        const CltParams pr = params_for(t, nu4);
        const double z = z975();
        const Interval iv = confidence_interval(pr, 0.05, variant);
        CHECK(std::abs(standardize(iv.upper, pr, variant) - z) < 1e-10);
        CHECK(std::abs(standardize(iv.lower, pr, variant) + z) < 1e-10);
        CHECK(std::abs(standardize(pr.center + pr.mean(variant) / pr.rate_scale(), pr,
                                   variant)) < 1e-10);
        for (int i = -50; i <= 50; ++i) {
          const double risk = iv.lower + (iv.upper - iv.lower) * (0.5 + i / 40.0);
          const double tz = standardize(risk, pr, variant);
          if (std::abs(std::abs(tz) - z) > 1e-10) {
            CHECK(iv.contains(risk) == (std::abs(tz) <= z));
          }
        }
      }
    }
  }
}

TEST_CASE("theorem names") {
  for (Theorem t : kAll) CHECK(theorem_from_string(to_string(t)) == t);
  CHECK_THROWS(theorem_from_string("t6"));
  CHECK(rate_of(Theorem::t4) == Rate::p);
  CHECK(rate_of(Theorem::t3) == Rate::sqrt_p);
}
