#include "fkp/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "fkp/error.hpp"

namespace fkp {

Grid2D Grid2D::make(int nx, int ny, double lx, double ly) {
  if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0) {
    throw InvalidArgument("grid sizes must be even and >= 8, got " + std::to_string(nx) + "x" +
                          std::to_string(ny));
  }
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw InvalidArgument("grid lengths must be positive and finite");
  }
  return Grid2D(nx, ny, lx, ly);
}

std::vector<double> Grid2D::xi() const {
  std::vector<double> out(nx_);
  for (int m = -nx_ / 2; m < nx_ / 2; ++m) out[m + nx_ / 2] = kTwoPi * m / lx_;
  return out;
}

std::vector<double> Grid2D::eta() const {
  std::vector<double> out(ny_);
  for (int m = -ny_ / 2; m < ny_ / 2; ++m) out[m + ny_ / 2] = kTwoPi * m / ly_;
  return out;
}

const char* to_string(Space s) { return s == Space::real ? "real" : "spectral"; }

Field Field::real(const Grid2D& grid, std::vector<double> values) {
  if (values.size() != grid.size()) throw InvalidArgument("value count does not match grid");
  Field f(grid, Space::real);
  f.values_ = std::move(values);
  return f;
}

Field Field::spectral(const Grid2D& grid, std::vector<Complex> coeffs) {
  if (coeffs.size() != grid.size()) throw InvalidArgument("coefficient count does not match grid");
  Field f(grid, Space::spectral);
  f.coeffs_ = std::move(coeffs);
  return f;
}

Field Field::zeros(const Grid2D& grid, Space space) {
  if (space == Space::real) return real(grid, std::vector<double>(grid.size(), 0.0));
  return spectral(grid, std::vector<Complex>(grid.size(), Complex{}));
}

Field Field::sample(const Grid2D& grid, const std::function<double(double, double)>& f) {
  std::vector<double> v(grid.size());
  for (int i = 0; i < grid.nx(); ++i) {
    for (int j = 0; j < grid.ny(); ++j) v[grid.index(i, j)] = f(grid.x(i), grid.y(j));
  }
  return real(grid, std::move(v));
}

std::span<const double> Field::values() const {
  if (space_ != Space::real) throw InvalidArgument("field is not in real space");
  return values_;
}

std::span<double> Field::values() {
  if (space_ != Space::real) throw InvalidArgument("field is not in real space");
  return values_;
}

std::span<const Complex> Field::coeffs() const {
  if (space_ != Space::spectral) throw InvalidArgument("field is not in spectral space");
  return coeffs_;
}

std::span<Complex> Field::coeffs() {
  if (space_ != Space::spectral) throw InvalidArgument("field is not in spectral space");
  return coeffs_;
}

Field Field::to_spectral() const {
  if (space_ == Space::spectral) return *this;
  std::vector<Complex> c(grid_.size());
  detail::fft_forward(grid_.nx(), grid_.ny(), values_, c);
  return spectral(grid_, std::move(c));
}

Field Field::to_real() const {
  if (space_ == Space::real) return *this;
  std::vector<double> v(grid_.size());
  detail::fft_inverse(grid_.nx(), grid_.ny(), coeffs_, v);
  return real(grid_, std::move(v));
}

namespace {

// Applies m(i, j) coefficientwise to the spectral representation of u.
template <class Multiplier>
Field apply(const Field& u, Multiplier&& m) {
  Field out = u.to_spectral();
  const Grid2D& g = out.grid();
  auto c = out.coeffs();
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) c[g.index(i, j)] *= m(i, j);
  }
  return out;
}

double spectral_energy(std::span<const Complex> c) {
  double e = 0.0;
  for (const auto& z : c) e += std::norm(z);
  return e;
}

double zero_column_energy(const Field& s) {
  const Grid2D& g = s.grid();
  auto c = s.coeffs();
  double e = 0.0;
  for (int j = 0; j < g.ny(); ++j) e += std::norm(c[g.index(0, j)]);
  return e;
}

void check_zero_column(const Field& s, const char* op) {
  const double total = spectral_energy(s.coeffs());
  const double zero = zero_column_energy(s);
  if (total > 0.0 && zero > kZeroColumnTolerance * total) {
    throw ConstraintViolation(std::string(op) +
                              ": negative order needs an empty xi = 0 column (relative energy " +
                              std::to_string(zero / total) + ")");
  }
}

}  // namespace

Field frac_deriv_x(const Field& u, double s) {
  Field spec = u.to_spectral();
  if (s < 0.0) check_zero_column(spec, "frac_deriv_x");
  const Grid2D& g = spec.grid();
  return apply(spec, [&](int i, int) -> double {
    if (g.mode_x(i) == 0) return s == 0.0 ? 1.0 : 0.0;
    return std::pow(std::abs(g.kx(i)), s);
  });
}

Field frac_deriv_y(const Field& u, double s) {
  Field spec = u.to_spectral();
  const Grid2D& g = spec.grid();
  if (s < 0.0) {
    const double total = spectral_energy(spec.coeffs());
    double zero = 0.0;
    for (int i = 0; i < g.nx(); ++i) zero += std::norm(spec.coeffs()[g.index(i, 0)]);
    if (total > 0.0 && zero > kZeroColumnTolerance * total) {
      throw ConstraintViolation("frac_deriv_y: negative order needs an empty eta = 0 row");
    }
  }
  return apply(spec, [&](int, int j) -> double {
    if (g.mode_y(j) == 0) return s == 0.0 ? 1.0 : 0.0;
    return std::pow(std::abs(g.ky(j)), s);
  });
}

Field antideriv_x_deriv_y(const Field& u, double* discarded) {
  Field spec = u.to_spectral();
  const Grid2D& g = spec.grid();
  if (discarded != nullptr) {
    double e = 0.0;
    for (int j = 0; j < g.ny(); ++j) e += std::norm(g.ky(j) * spec.coeffs()[g.index(0, j)]);
    *discarded += g.lx() * g.ly() * e;
  }
  return apply(spec, [&](int i, int j) -> double {
    if (g.mode_x(i) == 0 || g.nyquist_x(i) || g.nyquist_y(j)) return 0.0;
    return g.ky(j) / g.kx(i);
  });
}

Field bessel_x(const Field& u, double s) {
  const Grid2D& g = u.grid();
  return apply(u, [&](int i, int) { return std::pow(1.0 + g.kx(i) * g.kx(i), 0.5 * s); });
}

Field deriv_x(const Field& u) {
  const Grid2D& g = u.grid();
  return apply(u, [&](int i, int) {
    return g.nyquist_x(i) ? Complex{} : Complex(0.0, g.kx(i));
  });
}

Field deriv_y(const Field& u) {
  const Grid2D& g = u.grid();
  return apply(u, [&](int, int j) {
    return g.nyquist_y(j) ? Complex{} : Complex(0.0, g.ky(j));
  });
}

Field dealias_23(const Field& u) {
  const Grid2D& g = u.grid();
  return apply(u, [&](int i, int j) {
    const bool cut = 3 * std::abs(g.mode_x(i)) > g.nx() || 3 * std::abs(g.mode_y(j)) > g.ny();
    return cut ? 0.0 : 1.0;
  });
}

double norm_l2(const Field& u) {
  const Grid2D& g = u.grid();
  if (u.is_real()) {
    double s = 0.0;
    for (double v : u.values()) s += v * v;
    return std::sqrt(g.cell_area() * s);
  }
  return std::sqrt(g.lx() * g.ly() * spectral_energy(u.coeffs()));
}

double norm_linf(const Field& u) {
  Field r = u.to_real();
  double m = 0.0;
  for (double v : r.values()) m = std::max(m, std::abs(v));
  return m;
}

double norm_w1inf_x(const Field& u) { return norm_linf(u) + norm_linf(deriv_x(u)); }

double norm_xs(const Field& u, double s) {
  const double a = norm_l2(bessel_x(u, s));
  const double b = norm_l2(antideriv_x_deriv_y(u));
  return std::sqrt(a * a + b * b);
}

double norm_hs1s2(const Field& u, double s1, double s2) {
  const Grid2D& g = u.grid();
  Field w = apply(u, [&](int i, int j) {
    return std::pow(1.0 + g.kx(i) * g.kx(i), 0.5 * s1) * std::pow(1.0 + g.ky(j) * g.ky(j), 0.5 * s2);
  });
  return norm_l2(w);
}

double mass(const Field& u) {
  const Grid2D& g = u.grid();
  if (u.is_real()) {
    double s = 0.0;
    for (double v : u.values()) s += v;
    return g.cell_area() * s;
  }
  return g.lx() * g.ly() * u.coeffs()[0].real();
}

}  // namespace fkp
