#include "fkp/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "fkp/error.hpp"
#include "gauss.hpp"

namespace fkp {

DtCriterion dt_criterion(const Field& u0) {
  const Field s = u0.to_spectral();
  const Grid2D& g = s.grid();
  const auto& c = s.coeffs();
  const double area = g.lx() * g.ly();
  DtCriterion r;
  double total = 0.0, value2 = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) {
      const double e = std::norm(c[g.index(i, j)]);
      total += e;
      if (g.mode_x(i) == 0) {
        if (g.mode_y(j) != 0) r.zero_column_energy += area * e;
        continue;
      }
      const double q = g.ky(j) / g.kx(i);
      value2 += q * q * e;
    }
  }
  r.value = std::sqrt(area * value2);
  r.flag = r.zero_column_energy > 1e-12 * area * total;
  return r;
}

void validate(const QuadratureSpec& q) {
  if (!(q.xi_min_exclusion > 0.0)) throw InvalidArgument("xi_min_exclusion must be positive");
  if (q.xi_max != 0.0 && !(q.xi_max > q.xi_min_exclusion))
    throw InvalidArgument("xi_max must exceed the exclusion half-width");
  if (q.n_xi < 64) throw InvalidArgument("n_xi must be at least 64");
  if (!(q.taper_fraction > 0.0 && q.taper_fraction < 1.0))
    throw InvalidArgument("taper_fraction must lie in (0, 1)");
  if (q.order < 2 || q.order > 64) throw InvalidArgument("quadrature order must lie in [2, 64]");
  if (!(q.refine_tol > 0.0)) throw InvalidArgument("refine_tol must be positive");
}

double GaussianDatum::value(double x, double y) const {
  const double s2 = sigma * sigma;
  const double g = amplitude * s2 / kTwoPi * std::exp(-0.5 * s2 * (x * x + y * y));
  return kind == DatumKind::gaussian ? g : -s2 * x * g;
}

double GaussianDatum::x_mass(double y) const {
  if (kind == DatumKind::gaussian_dx) return 0.0;
  return amplitude * sigma / std::sqrt(kTwoPi) * std::exp(-0.5 * sigma * sigma * y * y);
}

namespace {

void check_datum(const GaussianDatum& d) {
  if (!(d.sigma > 0.0) || !std::isfinite(d.sigma)) throw InvalidArgument("datum sigma must be positive");
  if (!std::isfinite(d.amplitude)) throw InvalidArgument("datum amplitude must be finite");
}

struct XiRule {
  std::vector<double> xi;  // positive nodes; the rule is mirrored to -xi
  std::vector<double> w;
};

// Panels on (eps, xi_max) no wider than the geometric scale, the uniform cap,
// sigma / 4 and pi / (local phase rate).
XiRule build_xi_rule(const GaussianDatum& d, const KPSymbol& sym, double x_reach, double y_reach,
                     double t, const QuadratureSpec& q, int level) {
  const double scale = std::ldexp(1.0, -level);
  const double eps = q.xi_min_exclusion * scale;
  const double xi_max = q.xi_max > 0.0 ? q.xi_max : 12.0 * d.sigma;
  const double taper_start = (1.0 - q.taper_fraction) * xi_max;
  const double cap = std::min(xi_max / q.n_xi, 0.25 * d.sigma) * scale;
  const double y_rate = t != 0.0 ? y_reach * y_reach / (4.0 * std::abs(t)) : 0.0;
  auto rate = [&](double xi) {
    return x_reach + std::abs(t) * std::abs(sym.family().dw(xi, 1)) + y_rate + 1.0;
  };

  const auto& gl = detail::gauss_legendre(q.order);
  XiRule r;
  double a = eps;
  while (a < xi_max) {
    double h = std::min(a, cap);
    h = std::min(h, kPi * scale / rate(a + h));
    double b = std::min(a + h, xi_max);
    if (a < taper_start && b > taper_start) b = taper_start;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < gl.x.size(); ++k) {
      r.xi.push_back(mid + half * gl.x[k]);
      r.w.push_back(half * gl.w[k]);
    }
    a = b;
  }
  return r;
}

double taper_weight(double a, double xi_max, const QuadratureSpec& q) {
  const double start = (1.0 - q.taper_fraction) * xi_max;
  if (a <= start) return 1.0;
  const double s = (a - start) / (xi_max - start);
  if (q.taper == Taper::cosine) return 0.5 * (1.0 + std::cos(kPi * s));
  return std::exp(-0.5 * (3.0 * s) * (3.0 * s));
}

// Weighted xi integrand (2 pi)^{-2} g^(xi) dxi for both signs of xi, in the
// layout [+xi nodes..., -xi nodes...]. The eta integral of
// exp(-eta^2 / (2 sigma^2) - i kappa t eta^2 / xi + i y eta) is sqrt(pi / a) exp(-y^2 / (4a)).
std::vector<Complex> weighted_transform(const GaussianDatum& d, const KPSymbol& sym, const XiRule& r,
                                        double y, double t, const QuadratureSpec& q) {
  const double xi_max = q.xi_max > 0.0 ? q.xi_max : 12.0 * d.sigma;
  const double s2 = d.sigma * d.sigma;
  const std::size_t n = r.xi.size();
  std::vector<Complex> out(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int sgn : {1, -1}) {
      const double xi = sgn * r.xi[k];
      const Complex a(0.5 / s2, sym.kappa() * t / xi);
      Complex g = d.amplitude * std::exp(-0.5 * xi * xi / s2) * std::sqrt(kPi / a) * std::exp(-y * y / (4.0 * a));
      if (d.kind == DatumKind::gaussian_dx) g *= Complex(0.0, xi);
      g *= std::polar(1.0, t * sym.family().w(xi));
      g *= taper_weight(r.xi[k], xi_max, q) * r.w[k] / (kTwoPi * kTwoPi);
      out[sgn > 0 ? k : n + k] = g;
    }
  }
  return out;
}

Complex inverse_at(const XiRule& r, const std::vector<Complex>& wg, double x) {
  const std::size_t n = r.xi.size();
  Complex s{};
  for (std::size_t k = 0; k < n; ++k) {
    const Complex e = std::polar(1.0, x * r.xi[k]);
    s += wg[k] * e + wg[n + k] * std::conj(e);
  }
  return s;
}

std::vector<Complex> evaluate(const GaussianDatum& d, const KPSymbol& sym,
                              const std::vector<std::pair<double, double>>& pts, double t,
                              const QuadratureSpec& q, int level, std::size_t* nodes) {
  double x_reach = 0.0, y_reach = 0.0;
  for (const auto& [x, y] : pts) {
    x_reach = std::max(x_reach, std::abs(x));
    y_reach = std::max(y_reach, std::abs(y));
  }
  const XiRule r = build_xi_rule(d, sym, x_reach, y_reach, t, q, level);
  if (nodes) *nodes = 2 * r.xi.size();
  std::map<double, std::vector<Complex>> by_y;
  std::vector<Complex> out;
  out.reserve(pts.size());
  for (const auto& [x, y] : pts) {
    auto it = by_y.find(y);
    if (it == by_y.end()) it = by_y.emplace(y, weighted_transform(d, sym, r, y, t, q)).first;
    out.push_back(inverse_at(r, it->second, x));
  }
  return out;
}

}  // namespace

FreeSolution free_solution_at(const GaussianDatum& datum, const KPSymbol& symbol,
                              const std::vector<std::pair<double, double>>& pts, double t,
                              const QuadratureSpec& q) {
  check_datum(datum);
  validate(q);
  if (!std::isfinite(t)) throw InvalidArgument("t must be finite");
  FreeSolution s;
  s.values = evaluate(datum, symbol, pts, t, q, 0, &s.nodes);
  const auto fine = evaluate(datum, symbol, pts, t, q, 1, nullptr);
  double scale = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    s.refinement_change.push_back(std::abs(fine[k] - s.values[k]));
    s.max_change = std::max(s.max_change, s.refinement_change.back());
    scale = std::max(scale, std::abs(s.values[k]));
  }
  s.flagged = !(s.max_change <= q.refine_tol * std::max(scale, 1e-300));
  return s;
}

namespace {

struct MassPass {
  std::vector<Complex> sample;
  std::vector<Complex> fourier;
};

MassPass mass_pass(const GaussianDatum& d, const KPSymbol& sym, double y, double t,
                   const std::vector<double>& X_list, const QuadratureSpec& q, int level) {
  const double X_max = X_list.back();
  const XiRule r = build_xi_rule(d, sym, X_max, std::abs(y), t, q, level);
  const auto wg = weighted_transform(d, sym, r, y, t, q);
  const std::size_t n = r.xi.size();

  MassPass p;
  for (double X : X_list) {
    Complex s{};
    for (std::size_t k = 0; k < n; ++k) {
      const double kern = 2.0 * std::sin(X * r.xi[k]) / r.xi[k];
      s += (wg[k] + wg[n + k]) * kern;
    }
    p.fourier.push_back(s);
  }

  // Composite Gauss-Legendre in x over [0, X_max] and its mirror, with panel
  // breaks at every X.
  const auto& gl = detail::gauss_legendre(q.order);
  const double h_max = kPi / (6.0 * d.sigma) * std::ldexp(1.0, -level);
  Complex acc{};
  double a = 0.0;
  for (double X : X_list) {
    const int panels = std::max(1, static_cast<int>(std::ceil((X - a) / h_max)));
    const double h = (X - a) / panels;
    for (int m = 0; m < panels; ++m) {
      const double mid = a + (m + 0.5) * h;
      for (std::size_t k = 0; k < gl.x.size(); ++k) {
        const double x = mid + 0.5 * h * gl.x[k];
        const double wx = 0.5 * h * gl.w[k];
        acc += wx * (inverse_at(r, wg, x) + inverse_at(r, wg, -x));
      }
    }
    p.sample.push_back(acc);
    a = X;
  }
  return p;
}

}  // namespace

MassTable generalized_x_mass(const GaussianDatum& datum, const KPSymbol& symbol, double y, double t,
                             const std::vector<double>& X_list, const QuadratureSpec& q) {
  check_datum(datum);
  validate(q);
  if (X_list.empty()) throw InvalidArgument("X_list is empty");
  for (std::size_t k = 0; k < X_list.size(); ++k) {
    if (!(X_list[k] > 0.0) || !std::isfinite(X_list[k]) || (k > 0 && !(X_list[k] > X_list[k - 1])))
      throw InvalidArgument("X_list must be positive and strictly increasing");
  }
  if (!std::isfinite(t) || !std::isfinite(y)) throw InvalidArgument("t and y must be finite");

  const MassPass base = mass_pass(datum, symbol, y, t, X_list, q, 0);
  const MassPass fine = mass_pass(datum, symbol, y, t, X_list, q, 1);
  MassTable tab;
  tab.y = y;
  tab.t = t;
  double scale = 0.0;
  for (const auto& m : base.sample) scale = std::max(scale, std::abs(m));
  for (std::size_t k = 0; k < X_list.size(); ++k) {
    MassRow row;
    row.X = X_list[k];
    row.mass = base.sample[k];
    row.mass_fourier = base.fourier[k];
    row.refinement_change = std::abs(fine.sample[k] - base.sample[k]);
    row.flagged = !(row.refinement_change <= q.refine_tol * std::max(scale, 1e-300));
    tab.flagged = tab.flagged || row.flagged;
    tab.rows.push_back(row);
  }
  return tab;
}

std::string MassTable::to_csv() const {
  std::string out = "X,mass_real,mass_imag_residual,flag\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", r.X, r.mass.real(), r.mass.imag(),
                  r.flagged ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace fkp
