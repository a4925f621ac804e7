#include "fkp/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "fkp/error.hpp"
#include "gauss.hpp"

namespace fkp {

CriticalExponents critical_exponents(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidArgument("alpha must lie in (0, 2]");
  CriticalExponents c;
  c.s_alpha = 2.0 - alpha / 4.0;
  c.l2_scaling_exponent = (3.0 * alpha - 4.0) / 4.0;
  return c;
}

GnRatio gn_ratio(const Field& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidArgument("alpha must lie in (0, 2]");
  const Field real = f.to_real();
  const Grid2D& g = real.grid();
  double l3 = 0.0;
  for (double v : real.values()) l3 += std::abs(v) * v * v;
  GnRatio r;
  r.lhs = l3 * g.cell_area();
  r.in_lemma_range = alpha >= 0.8 && alpha < 1.0;

  const double l2 = norm_l2(f);
  const double dpart = norm_l2(frac_deriv_x(f, alpha / 2.0));
  const double h = std::sqrt(l2 * l2 + dpart * dpart);
  const double ay = norm_l2(antideriv_x_deriv_y(f, &r.discarded));
  if (!(h > 0.0) || !(ay > 0.0))
    throw DomainError("gn_ratio: a right-hand factor vanishes");
  const double e2 = (5.0 * alpha - 4.0) / (alpha + 2.0);
  const double eh = (18.0 - 5.0 * alpha) / (2.0 * (alpha + 2.0));
  r.rhs = std::pow(l2, e2) * std::pow(h, eh) * std::sqrt(ay);
  r.ratio = r.lhs / r.rhs;
  return r;
}

GnScan gn_dilation_scan(const Field& f, double alpha, int min_pow, int max_pow) {
  if (min_pow > max_pow) throw InvalidArgument("empty dilation range");
  const Field real = f.to_real();
  const Grid2D& g = real.grid();
  GnScan s;
  s.min_ratio = INFINITY;
  for (int i = min_pow; i <= max_pow; ++i) {
    for (int j = min_pow; j <= max_pow; ++j) {
      const double a = std::ldexp(1.0, i), b = std::ldexp(1.0, j);
      const Grid2D gd = Grid2D::make(g.nx(), g.ny(), g.lx() / a, g.ly() / b);
      const double ratio = gn_ratio(Field::real(gd, {real.values().begin(), real.values().end()}), alpha).ratio;
      s.rows.push_back({a, b, ratio});
      s.max_ratio = std::max(s.max_ratio, ratio);
      s.min_ratio = std::min(s.min_ratio, ratio);
    }
  }
  return s;
}

std::string GnScan::to_csv() const {
  std::string out = "a,b,ratio\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.a, r.b, r.ratio);
    out += buf;
  }
  return out;
}

DecayValue decay_J(double lambda, double alpha, double R, const DecayOptions& opt) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidArgument("alpha must lie in (0, 2]");
  if (!(R > 1.0) || !std::isfinite(R)) throw InvalidArgument("R must exceed 1");
  if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");

  const auto& gl = detail::gauss_legendre(6);
  const double p = 0.5 * (alpha - 1.0);
  const double sgn = opt.conjugate ? -1.0 : 1.0;
  auto width = [&](double x) {
    return kTwoPi / (5.0 * (std::abs(lambda) + (alpha + 1.0) * std::pow(x, alpha)));
  };

  DecayValue v;
  v.lambda = lambda;
  v.R = R;
  Complex sum{};
  double a = 0.0;
  double b = std::ldexp(1.0, -34);
  while (a < R) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < gl.x.size(); ++k) {
      const double x = mid + half * gl.x[k];
      double amp = std::pow(x, p) * half * gl.w[k];
      if (x > 0.5 * R) amp *= 0.5 * (1.0 + std::cos(kPi * (x - 0.5 * R) / (0.5 * R)));
      const double phase = lambda * x + x * std::pow(x, alpha);
      // xi = x and xi = -x
      sum += amp * std::polar(1.0, sgn * (kPi / 4.0 + phase));
      sum += amp * std::polar(1.0, sgn * (-kPi / 4.0 - phase));
    }
    if (++v.panels > opt.max_panels) {
      v.flagged = true;
      break;
    }
    a = b;
    double h = std::min(a, width(a));
    h = std::min(h, width(a + h));
    b = std::min(a + h, R);
  }
  v.J = sum;
  return v;
}

DecayScan decay_scan(double alpha, const std::vector<double>& lambdas, double R, const DecayOptions& opt) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidArgument("alpha must lie in (0, 2]");
  if (lambdas.empty()) throw InvalidArgument("lambda grid is empty");
  DecayScan s;
  s.alpha = alpha;
  s.R = R;
  double worst = 0.0;
  for (double l : lambdas) {
    DecayRow row{l, decay_J(l, alpha, R, opt), decay_J(l, alpha, 2.0 * R, opt)};
    const double m = std::abs(row.at_R.J);
    if (m > s.sup_abs) {
      s.sup_abs = m;
      s.sup_lambda = l;
    }
    worst = std::max(worst, std::abs(row.at_R.J - row.at_2R.J));
    s.flagged = s.flagged || row.at_R.flagged || row.at_2R.flagged;
    s.rows.push_back(row);
  }
  s.max_rel_change = s.sup_abs > 0.0 ? worst / s.sup_abs : worst;
  s.stable = s.max_rel_change < 0.05 && std::isfinite(s.sup_abs);

  // |J| oscillates quickly in lambda, so each tenth of the range is sampled on
  // its own dense grid before the outer and adjacent peaks are compared.
  const auto [lo_it, hi_it] = std::minmax_element(lambdas.begin(), lambdas.end());
  const double lo = *lo_it, hi = *hi_it, tenth = (hi - lo) / 10.0;
  if (tenth > 0.0) {
    auto band_max = [&](double a, double b) {
      double m = 0.0;
      for (const auto& r : s.rows)
        if (r.lambda >= a && r.lambda <= b) m = std::max(m, std::abs(r.at_R.J));
      constexpr int dense = 16;
      for (int k = 0; k <= dense; ++k) {
        const auto v = decay_J(a + (b - a) * k / dense, alpha, R, opt);
        s.flagged = s.flagged || v.flagged;
        m = std::max(m, std::abs(v.J));
      }
      return m;
    };
    const bool left = band_max(lo, lo + tenth) > 1.25 * band_max(lo + tenth, lo + 2 * tenth);
    const bool right = band_max(hi - tenth, hi) > 1.25 * band_max(hi - 2 * tenth, hi - tenth);
    s.edge_growth = left || right;
  }
  return s;
}

std::string DecayScan::to_csv() const {
  std::string out = "lambda,reJ,imJ,absJ,R,flag\n";
  char buf[200];
  for (const auto& r : rows) {
    for (const DecayValue* v : {&r.at_R, &r.at_2R}) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", v->lambda, v->J.real(),
                    v->J.imag(), std::abs(v->J), v->R, v->flagged ? 1 : 0);
      out += buf;
    }
  }
  return out;
}

double embedding_ratio(const Field& u, double s) {
  if (!(s > 4.0)) throw InvalidArgument("embedding_ratio needs s > 4");
  const double den = norm_xs(u, s);
  if (!(den > 0.0)) throw DomainError("embedding_ratio: zero field");
  return norm_linf(deriv_x(u)) / den;
}

Field random_band_limited(std::uint64_t seed, int max_mode, int n) {
  if (max_mode < 1 || 2 * max_mode >= n) throw InvalidArgument("max_mode must lie in [1, n/2)");
  const Grid2D g = Grid2D::make(n, n, kTwoPi, kTwoPi);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> c(g.size());
  for (int kx = 1; kx <= max_mode; ++kx) {
    for (int ky = -max_mode; ky <= max_mode; ++ky) {
      const double re = normal(rng), im = normal(rng);
      const Complex z(re, im);
      const int i = kx, j = (ky + n) % n;
      const int ic = n - kx, jc = (n - ky) % n;
      c[g.index(i, j)] = z;
      c[g.index(ic, jc)] = std::conj(z);
    }
  }
  return Field::spectral(g, std::move(c)).to_real();
}

EmbeddingEnsemble embedding_ensemble(double s, int draws, std::uint64_t seed, int max_mode) {
  if (draws < 1) throw InvalidArgument("draws must be positive");
  EmbeddingEnsemble e;
  e.s = s;
  e.seed = seed;
  std::mt19937_64 seeds(seed);
  for (int k = 0; k < draws; ++k) {
    const double r = embedding_ratio(random_band_limited(seeds(), max_mode), s);
    e.ratios.push_back(r);
    e.max_ratio = std::max(e.max_ratio, r);
  }
  return e;
}

}  // namespace fkp
