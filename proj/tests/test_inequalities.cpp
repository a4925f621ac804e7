#include <cmath>

#include "doctest.h"
#include "fkp/error.hpp"
#include "fkp/evolution.hpp"
#include "fkp/inequalities.hpp"

using namespace fkp;

TEST_CASE("critical exponents") {
  const auto c2 = critical_exponents(2.0);
  CHECK(c2.s_alpha == 1.5);
  CHECK(c2.l2_critical == 4.0 / 3.0);
  CHECK(c2.energy_critical == 0.8);
  const auto c1 = critical_exponents(1.0);
  CHECK(c1.s_alpha == 1.75);
  CHECK(c1.l2_scaling_exponent == -0.25);
  CHECK(critical_exponents(4.0 / 3.0).l2_scaling_exponent == 0.0);
  for (int k = 1; k <= 20; ++k) {
    const double a = 0.1 * k;
    const auto c = critical_exponents(a);
    CHECK(c.s_alpha == 2.0 - a / 4.0);
    CHECK(c.l2_scaling_exponent == (3.0 * a - 4.0) / 4.0);
  }
  CHECK_THROWS_AS(critical_exponents(0.0), InvalidArgument);
  CHECK_THROWS_AS(critical_exponents(2.1), InvalidArgument);
}

namespace {

Field bump_dx(int n = 128, double L = 40.0) {
  const auto g = Grid2D::make(n, n, L, L);
  return deriv_x(gaussian_bump(g, 1.0, 1.5)).to_real();
}

Field scaled(const Field& f, double mu) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x *= mu;
  return Field::real(f.grid(), v);
}

}  // namespace

TEST_CASE("Gagliardo-Nirenberg ratio") {
  // the L2 exponent vanishes at the energy-critical order
  CHECK((5 * 0.8 - 4) / (0.8 + 2) == 0.0);
  const auto f = bump_dx();
  for (double alpha : {0.8, 0.9, 0.99}) {
    const auto base = gn_ratio(f, alpha);
    CHECK(std::isfinite(base.ratio));
    CHECK(base.ratio > 0.0);
    CHECK(base.in_lemma_range);
    for (double mu : {1e-3, 0.5, 7.0, 1e4}) CHECK(std::abs(gn_ratio(scaled(f, mu), alpha).ratio / base.ratio - 1) <= 1e-10);
  }
  CHECK_FALSE(gn_ratio(f, 1.5).in_lemma_range);
  CHECK_FALSE(gn_ratio(f, 0.5).in_lemma_range);

  const auto g = f.grid();
  const auto flat = Field::sample(g, [](double x, double) { return std::sin(kTwoPi * x / 40.0); });
  CHECK_THROWS_AS(gn_ratio(flat, 0.9), DomainError);
  CHECK_THROWS_AS(gn_ratio(Field::zeros(g), 0.9), DomainError);
}

TEST_CASE("dilation scan") {
  const auto f = bump_dx();
  const auto s = gn_dilation_scan(f, 0.9);
  CHECK(s.rows.size() == 49);
  CHECK(std::isfinite(s.max_ratio));
  CHECK(s.min_ratio > 0.0);
  CHECK(s.to_csv().rfind("a,b,ratio\n", 0) == 0);
  // b enters every factor with the same power and cancels
  for (const auto& r : s.rows) {
    if (r.b == 1.0) continue;
    for (const auto& q : s.rows) {
      if (q.a == r.a && q.b == 1.0) CHECK(r.ratio == doctest::Approx(q.ratio).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(gn_dilation_scan(f, 0.9, 1, 0), InvalidArgument);
}

TEST_CASE("decay kernel values") {
  // closed form at lambda = 0: both half-lines cancel
  CHECK(std::abs(decay_J(0.0, 2.0, 40.0).J) <= 1e-9);
  const auto a = decay_J(0.0, 2.0, 40.0), b = decay_J(0.0, 2.0, 80.0);
  CHECK(std::abs(a.J - b.J) <= 0.05 * std::max(std::abs(b.J), 1.0));
  for (double lambda : {-7.0, 0.5, 12.0}) {
    DecayOptions conj;
    conj.conjugate = true;
    const auto p = decay_J(lambda, 1.0, 100.0), q = decay_J(lambda, 1.0, 100.0, conj);
    CHECK(std::abs(q.J - std::conj(p.J)) <= 1e-8);
  }
  DecayOptions tiny;
  tiny.max_panels = 100;
  CHECK(decay_J(-10.0, 2.0, 40.0, tiny).flagged);
  CHECK_THROWS_AS(decay_J(0.0, 0.0, 40.0), InvalidArgument);
  CHECK_THROWS_AS(decay_J(0.0, 2.0, 0.5), InvalidArgument);
}

TEST_CASE("decay kernel tail") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double lambda : {-10.0, -1.0, 0.0, 3.0, 10.0}) {
      const double stat = lambda < 0 ? std::pow(-lambda / (alpha + 1), 1 / alpha) : 0.0;
      double R = std::max(8.0, 4.0 * stat);
      std::vector<double> diff;
      for (int k = 0; k < 4; ++k, R *= 2) diff.push_back(std::abs(decay_J(lambda, alpha, R).J - decay_J(lambda, alpha, 2 * R).J));
      for (std::size_t k = 0; k + 2 < diff.size(); ++k) {
        INFO("alpha=" << alpha << " lambda=" << lambda << " k=" << k);
        CHECK((diff[k + 2] < diff[k] || diff[k + 2] < 1e-9));
      }
    }
  }
}

TEST_CASE("stationary point") {
  const double alpha = 2.0;
  const double r = std::pow(kPi / (2 * alpha), 1 / (alpha + 1));
  const double predicted = -(alpha + 1) * std::pow(r, alpha);
  double prev = std::abs(decay_J(0.0, alpha, 20.0).J), peak = NAN;
  for (int k = 1; k <= 100; ++k) {
    const double lambda = -0.05 * k;
    const double cur = std::abs(decay_J(lambda, alpha, 20.0).J);
    const double next = std::abs(decay_J(lambda - 0.05, alpha, 20.0).J);
    if (cur > prev && cur >= next) {
      peak = lambda;
      break;
    }
    prev = cur;
  }
  REQUIRE(std::isfinite(peak));
  CHECK(std::abs(peak - predicted) <= 0.1 * std::abs(predicted));
}

TEST_CASE("decay scan") {
  std::vector<double> lambdas;
  for (int k = -20; k <= 20; ++k) lambdas.push_back(k);
  const auto s = decay_scan(2.0, lambdas, 20.0);
  CHECK(std::isfinite(s.sup_abs));
  CHECK(s.stable);
  CHECK_FALSE(s.edge_growth);
  CHECK_FALSE(s.flagged);
  CHECK(s.to_csv().rfind("lambda,reJ,imJ,absJ,R,flag\n", 0) == 0);
  CHECK_THROWS_AS(decay_scan(0.0, lambdas, 20.0), InvalidArgument);
  CHECK_THROWS_AS(decay_scan(2.0, {}, 20.0), InvalidArgument);
}

TEST_CASE("embedding") {
  const auto g = Grid2D::make(64, 64, kTwoPi, kTwoPi);
  const auto c = Field::sample(g, [](double x, double) { return std::cos(x); });
  // coefficients 1/2 at xi = +-1: ||u||_{X^s}^2 = 4 pi^2 * 2 * (1/4) * 2^s
  const double s = 4.5;
  const double want = 1.0 / std::sqrt(4 * kPi * kPi * 0.5 * std::pow(2.0, s));
  CHECK(std::abs(embedding_ratio(c, s) / want - 1) <= 1e-12);
  CHECK(want == doctest::Approx(1.0 / (std::pow(2.0, 2.25) * kPi * std::sqrt(2.0))).epsilon(1e-15));

  const auto u = random_band_limited(3);
  const double r1 = embedding_ratio(u, 4.5);
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x *= -3.7;
  CHECK(embedding_ratio(Field::real(u.grid(), v), 4.5) == doctest::Approx(r1).epsilon(1e-13));
  double prev = INFINITY;
  for (double sv : {4.1, 4.5, 5.0, 6.0, 8.0}) {
    const double r = embedding_ratio(u, sv);
    CHECK(r <= prev);
    prev = r;
  }
  CHECK_THROWS_AS(embedding_ratio(u, 4.0), InvalidArgument);
  CHECK_THROWS_AS(embedding_ratio(Field::zeros(g), 4.5), DomainError);
}

TEST_CASE("embedding ensemble") {
  const auto e = embedding_ensemble(4.5, 100, 1);
  CHECK(e.ratios.size() == 100);
  CHECK(std::isfinite(e.max_ratio));
  const auto again = embedding_ensemble(4.5, 100, 1);
  CHECK(again.ratios == e.ratios);
  const auto e5 = embedding_ensemble(5.0, 100, 1), e6 = embedding_ensemble(6.0, 100, 1);
  CHECK(e5.max_ratio <= e.max_ratio);
  CHECK(e6.max_ratio <= e5.max_ratio);
  const auto u = random_band_limited(9, 16);
  // real and band-limited
  const auto sp = u.to_spectral();
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      if (std::abs(sp.grid().mode_x(i)) > 16 || std::abs(sp.grid().mode_y(j)) > 16 || sp.grid().mode_x(i) == 0)
        CHECK(std::abs(sp.coeffs()[sp.grid().index(i, j)]) <= 1e-13);
    }
  CHECK_THROWS_AS(random_band_limited(1, 40), InvalidArgument);
}
