#include "fkp/resonance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "fkp/error.hpp"
#include "gauss.hpp"

namespace fkp {

const char* to_string(Variant v) { return v == Variant::fkp2 ? "fkp2" : "fkp1"; }

Variant parse_variant(const std::string& s) {
  if (s == "fkp2") return Variant::fkp2;
  if (s == "fkp1") return Variant::fkp1;
  throw InvalidArgument("unknown variant '" + s + "' (expected fkp2 or fkp1)");
}

namespace {

double wpow(double alpha, double xi) { return std::pow(std::abs(xi), alpha) * xi; }

}  // namespace

double gamma1(double alpha, double xi1, double xi2) {
  if (!std::isfinite(alpha) || !std::isfinite(xi1) || !std::isfinite(xi2))
    throw InvalidArgument("gamma1 needs finite inputs");
  if (xi1 == 0.0 || xi2 == 0.0) return 0.0;
  // Expand around the larger frequency: w(b + a) - w(b) = w(b) expm1((alpha+1) log1p(a/b))
  // when a/b > -1, i.e. both on the same side or |a| < |b|.
  const double a = std::abs(xi1) <= std::abs(xi2) ? xi1 : xi2;
  const double b = std::abs(xi1) <= std::abs(xi2) ? xi2 : xi1;
  const double r = a / b;
  if (r > -1.0) return wpow(alpha, b) * std::expm1((alpha + 1.0) * std::log1p(r)) - wpow(alpha, a);
  return wpow(alpha, xi1 + xi2) - wpow(alpha, xi1) - wpow(alpha, xi2);
}

double gamma2(double xi1, double xi2, double eta1, double eta2) {
  const double den = (xi1 + xi2) * xi1 * xi2;
  if (den == 0.0) throw DomainError("gamma2: xi1, xi2 and xi1 + xi2 must be nonzero");
  const double num = eta1 * xi2 - eta2 * xi1;
  return num * num / den;
}

double omega_res(Variant v, double alpha, double xi1, double xi2, double eta1, double eta2) {
  const double g2 = gamma2(xi1, xi2, eta1, eta2);
  const double g1 = gamma1(alpha, xi1, xi2);
  return v == Variant::fkp2 ? g1 + g2 : g1 - g2;
}

double rect_norm(const Rect& r, double s1, double s2) {
  const auto& gl = detail::gauss_legendre(16);
  double sum = 0.0;
  for (std::size_t p = 0; p < gl.x.size(); ++p) {
    const double dx = r.xi_lo + 0.5 * r.width() * (gl.x[p] + 1.0);
    const double xi = r.xi_base + dx;
    const double wx = std::pow(1.0 + xi * xi, s1);
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      const double eta = r.eta_base + r.eta_lo + 0.5 * r.height() * (gl.x[q] + 1.0);
      sum += gl.w[p] * gl.w[q] * wx * std::pow(1.0 + eta * eta, s2);
    }
  }
  return std::abs(r.amplitude) * std::sqrt(0.25 * r.width() * r.height() * sum);
}

ResonanceTestData build_test_data(Variant v, double alpha, double N, double theta, double s1, double s2) {
  if (!(N >= 10.0) || !std::isfinite(N)) throw InvalidArgument("N must be at least 10");
  if (!(theta > 0.0 && theta <= 0.1)) throw InvalidArgument("theta must lie in (0, 0.1]");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidArgument("alpha must lie in (0, 2]");
  if (!std::isfinite(s1) || !std::isfinite(s2)) throw InvalidArgument("s1 and s2 must be finite");

  ResonanceTestData d;
  d.variant = v;
  d.alpha = alpha;
  d.N = N;
  d.theta = theta;
  d.s1 = s1;
  d.s2 = s2;
  if (v == Variant::fkp2) {
    const double g = std::pow(N, -alpha - theta);
    const double e = 0.5 + theta;
    const double ge = std::pow(g, e);
    const double amp = std::pow(g, -0.5 - 0.5 * e);
    d.gamma = g;
    d.epsilon = e;
    d.rect1 = {0.0, 0.0, 0.5 * g, g, ge, 2.0 * ge, amp};
    d.rect2 = {N, 0.0, 0.0, g, -ge, -0.25 * ge, std::pow(N, -s1) * amp};
  } else {
    const double g = std::pow(N, -0.25 * alpha - theta);
    const double c = std::sqrt(1.0 + alpha);
    const double amp = std::pow(g, -1.5);
    d.gamma = g;
    d.rect1 = {0.0, 0.0, 0.5 * g, g, -c * g * g, c * g * g, amp};
    d.rect2 = {N, c * std::pow(N, 0.5 * (alpha + 2.0)), 0.0, g, 0.0, g * g,
               amp * std::pow(N, -s1 - (1.0 + 0.5 * alpha) * s2)};
  }
  d.norm1 = rect_norm(d.rect1, s1, s2);
  d.norm2 = rect_norm(d.rect2, s1, s2);
  return d;
}

BoundsReport resonance_bounds_check(const ResonanceTestData& d, long n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("n_samples must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const double inf = std::numeric_limits<double>::infinity();
  BoundsReport r;
  r.n_samples = n_samples;
  r.seed = seed;
  r.gamma1_ratio_min = r.gamma2_ratio_min = inf;
  const double a = d.alpha, N = d.N, g = d.gamma;
  const double g1_scale = g * std::pow(N, a);
  const double g2_scale = d.variant == Variant::fkp2 ? std::pow(g, 2.0 * d.epsilon - 1.0) : g1_scale;
  for (long k = 0; k < n_samples; ++k) {
    const double xi1 = d.rect1.xi_base + draw(d.rect1.xi_lo, d.rect1.xi_hi);
    const double eta1 = d.rect1.eta_base + draw(d.rect1.eta_lo, d.rect1.eta_hi);
    const double xi2 = d.rect2.xi_base + draw(d.rect2.xi_lo, d.rect2.xi_hi);
    const double eta2 = d.rect2.eta_base + draw(d.rect2.eta_lo, d.rect2.eta_hi);
    const double G1 = gamma1(a, xi1, xi2);
    const double G2 = gamma2(xi1, xi2, eta1, eta2);
    const double q1 = std::abs(G1) / g1_scale, q2 = std::abs(G2) / g2_scale;
    r.gamma1_ratio_min = std::min(r.gamma1_ratio_min, q1);
    r.gamma1_ratio_max = std::max(r.gamma1_ratio_max, q1);
    r.gamma2_ratio_min = std::min(r.gamma2_ratio_min, q2);
    r.gamma2_ratio_max = std::max(r.gamma2_ratio_max, q2);
    r.omega_max = std::max(r.omega_max, std::abs(d.variant == Variant::fkp2 ? G1 + G2 : G1 - G2));
    if (d.variant == Variant::fkp1) {
      const double lead = (1.0 + a) * std::pow(N, a) * xi1;
      r.gamma1_remainder_max =
          std::max(r.gamma1_remainder_max, std::abs(G1 - lead) / (g * g * std::pow(N, a - 1.0)));
      r.gamma2_remainder_max =
          std::max(r.gamma2_remainder_max, std::abs(G2 - lead) / (std::pow(N, 0.5 * a) * g * g));
    }
  }
  return r;
}

KernelValue picard_kernel(double omega, double t) {
  const double z = t * omega;
  if (std::abs(z) < 1e-4) {
    // i t (1 + i z / 2 - z^2 / 6)
    return {-t * z / 2.0, t * (1.0 - z * z / 6.0)};
  }
  const double h = std::sin(0.5 * z);
  return {-2.0 * h * h / omega, std::sin(z) / omega};
}

namespace {

// Sorted pairwise sums of two intervals: breakpoints of the output support.
std::array<double, 4> sum_breaks(double a0, double a1, double b0, double b1) {
  std::array<double, 4> s{a0 + b0, a1 + b0, a0 + b1, a1 + b1};
  std::sort(s.begin(), s.end());
  return s;
}

struct PassResult {
  double norm2 = 0.0;
  double omega_max = 0.0;
};

// F at output offsets (dx, dy) relative to rect2's base: integral over the
// second input inside rect2 with the first input (output minus second) in rect1.
double output_density(const ResonanceTestData& d, double t, const detail::GaussRule& gl, int panels,
                      double dx, double dy, double& omega_max) {
  const Rect& r1 = d.rect1;
  const Rect& r2 = d.rect2;
  const double lo = std::max(r2.xi_lo, dx - r1.xi_hi), hi = std::min(r2.xi_hi, dx - r1.xi_lo);
  const double elo = std::max(r2.eta_lo, dy - r1.eta_hi), ehi = std::min(r2.eta_hi, dy - r1.eta_lo);
  if (!(hi > lo) || !(ehi > elo)) return 0.0;
  const double hx = (hi - lo) / panels, hy = (ehi - elo) / panels;
  const double xi = r2.xi_base + dx;
  double re = 0.0, im = 0.0;
  for (int pi = 0; pi < panels; ++pi) {
    for (std::size_t p = 0; p < gl.x.size(); ++p) {
      const double d2 = lo + hx * (pi + 0.5 * (gl.x[p] + 1.0));
      const double xi2 = r2.xi_base + d2;
      const double xi1 = dx - d2;
      for (int qi = 0; qi < panels; ++qi) {
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
          const double e2 = elo + hy * (qi + 0.5 * (gl.x[q] + 1.0));
          const double eta2 = r2.eta_base + e2;
          const double eta1 = dy - e2;
          const double om = omega_res(d.variant, d.alpha, xi1, xi2, eta1, eta2);
          omega_max = std::max(omega_max, std::abs(om));
          const KernelValue k = picard_kernel(om, t);
          const double w = 0.25 * hx * hy * gl.w[p] * gl.w[q];
          re += w * k.re;
          im += w * k.im;
        }
      }
    }
  }
  const double scale = xi * r1.amplitude * r2.amplitude;
  return scale * scale * (re * re + im * im);
}

PassResult picard_pass(const ResonanceTestData& d, double t, const PicardOptions& opt, int level) {
  const auto& gl = detail::gauss_legendre(opt.order);
  const int panels = 1 << level;
  std::vector<std::pair<double, double>> xcells, ycells;
  if (opt.window) {
    xcells.emplace_back(opt.window->xi_lo, opt.window->xi_hi);
    ycells.emplace_back(opt.window->eta_lo, opt.window->eta_hi);
  } else {
    const auto bx = sum_breaks(d.rect1.xi_lo, d.rect1.xi_hi, d.rect2.xi_lo, d.rect2.xi_hi);
    const auto by = sum_breaks(d.rect1.eta_lo, d.rect1.eta_hi, d.rect2.eta_lo, d.rect2.eta_hi);
    for (int k = 0; k < 3; ++k) {
      if (bx[k + 1] > bx[k]) xcells.emplace_back(bx[k], bx[k + 1]);
      if (by[k + 1] > by[k]) ycells.emplace_back(by[k], by[k + 1]);
    }
  }
  PassResult r;
  for (const auto& [xa, xb] : xcells) {
    const double hx = (xb - xa) / panels;
    for (const auto& [ya, yb] : ycells) {
      const double hy = (yb - ya) / panels;
      for (int pi = 0; pi < panels; ++pi) {
        for (std::size_t p = 0; p < gl.x.size(); ++p) {
          const double dx = xa + hx * (pi + 0.5 * (gl.x[p] + 1.0));
          const double xi = d.rect2.xi_base + dx;
          const double wxi = std::pow(1.0 + xi * xi, d.s1);
          for (int qi = 0; qi < panels; ++qi) {
            for (std::size_t q = 0; q < gl.x.size(); ++q) {
              const double dy = ya + hy * (qi + 0.5 * (gl.x[q] + 1.0));
              const double eta = d.rect2.eta_base + dy;
              const double f2 = output_density(d, t, gl, panels, dx, dy, r.omega_max);
              const double w = 0.25 * hx * hy * gl.w[p] * gl.w[q];
              r.norm2 += w * f2 * wxi * std::pow(1.0 + eta * eta, d.s2);
            }
          }
        }
      }
    }
  }
  return r;
}

}  // namespace

PicardResult picard_second_norm(const ResonanceTestData& d, double t, const PicardOptions& opt) {
  if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("t must lie in (0, 1]");
  if (opt.order < 2 || opt.order > 64) throw InvalidArgument("order must lie in [2, 64]");
  if (opt.max_level < 1 || opt.max_level > 6) throw InvalidArgument("max_level must lie in [1, 6]");
  if (!(opt.rel_tol > 0.0)) throw InvalidArgument("rel_tol must be positive");

  PicardResult res;
  res.N = d.N;
  res.t = t;
  PassResult prev = picard_pass(d, t, opt, 0);
  res.omega_max = prev.omega_max;
  double change = std::numeric_limits<double>::infinity();
  int level = 0;
  while (level < opt.max_level) {
    ++level;
    const PassResult next = picard_pass(d, t, opt, level);
    const double a = std::sqrt(prev.norm2), b = std::sqrt(next.norm2);
    change = b > 0.0 ? std::abs(b - a) / b : std::abs(b - a);
    res.omega_max = std::max(res.omega_max, next.omega_max);
    prev = next;
    if (change < opt.rel_tol) break;
  }
  res.level = level;
  res.norm = std::sqrt(prev.norm2);
  res.refinement_change = change;
  res.flagged = !(change < opt.rel_tol) || !std::isfinite(res.norm);
  const double denom = d.norm1 * d.norm2;
  res.ratio = denom > 0.0 ? res.norm / denom : 0.0;
  return res;
}

ExponentFit growth_exponent_fit(const std::vector<PicardResult>& results) {
  if (results.size() < 3) throw InvalidArgument("growth_exponent_fit needs at least 3 results");
  std::vector<double> x, y;
  for (const auto& r : results) {
    if (!(r.N > 0.0) || !(r.ratio > 0.0)) throw InvalidArgument("growth_exponent_fit needs positive N and ratio");
    if (std::find(x.begin(), x.end(), std::log(r.N)) != x.end())
      throw InvalidArgument("growth_exponent_fit needs distinct N");
    x.push_back(std::log(r.N));
    y.push_back(std::log(r.ratio));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k] / n;
    my += y[k] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  ExponentFit f;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

double predicted_exponent(Variant v, double alpha) {
  return v == Variant::fkp2 ? 1.0 - 0.75 * alpha : 1.0 - 0.375 * alpha;
}

}  // namespace fkp
