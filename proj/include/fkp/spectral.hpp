#pragma once

// Periodic grids, spectral transforms, Fourier multipliers and the norms used
// throughout the toolkit.
//
// Layout: real values and spectral coefficients are stored row-major with
// the x index slowest, element (i, j) at i * ny + j. Spectral coefficients
// are in FFT order (index i carries mode i for i < nx/2, i - nx otherwise)
// and are normalised as Fourier-series coefficients:
//
//   u(x_i, y_j) = sum_{p,q} c_{pq} exp(i (xi_p x_i + eta_q y_j)).
//
// The continuum L2 norm on the box is then sqrt(lx * ly * sum |c|^2).

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fkp {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class Grid2D {
 public:
  // nx, ny even and >= 8; lx, ly > 0. Throws InvalidArgument otherwise.
  static Grid2D make(int nx, int ny, double lx, double ly);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * ny_ + j;
  }

  double dx() const { return lx_ / nx_; }
  double dy() const { return ly_ / ny_; }
  double x(int i) const { return i * lx_ / nx_; }
  double y(int j) const { return j * ly_ / ny_; }
  double cell_area() const { return (lx_ * ly_) / (static_cast<double>(nx_) * ny_); }

  // Signed mode number of FFT-ordered index i (resp. j).
  int mode_x(int i) const { return i < nx_ / 2 ? i : i - nx_; }
  int mode_y(int j) const { return j < ny_ / 2 ? j : j - ny_; }
  bool nyquist_x(int i) const { return i == nx_ / 2; }
  bool nyquist_y(int j) const { return j == ny_ / 2; }

  // Wavenumber xi = 2 pi m / lx of FFT-ordered index i.
  double kx(int i) const { return kTwoPi * mode_x(i) / lx_; }
  double ky(int j) const { return kTwoPi * mode_y(j) / ly_; }

  // Ascending lattices xi_m = 2 pi m / lx, m = -nx/2 .. nx/2 - 1 (and eta).
  std::vector<double> xi() const;
  std::vector<double> eta() const;

  bool operator==(const Grid2D&) const = default;

 private:
  Grid2D(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {}

  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

enum class Space { real, spectral };

const char* to_string(Space s);

class Field {
 public:
  static Field real(const Grid2D& grid, std::vector<double> values);
  static Field spectral(const Grid2D& grid, std::vector<Complex> coeffs);
  static Field zeros(const Grid2D& grid, Space space = Space::real);
  // Samples f(x, y) at the grid nodes.
  static Field sample(const Grid2D& grid, const std::function<double(double, double)>& f);

  const Grid2D& grid() const { return grid_; }
  Space space() const { return space_; }
  bool is_real() const { return space_ == Space::real; }

  // Throw InvalidArgument when the field is in the other space.
  std::span<const double> values() const;
  std::span<double> values();
  std::span<const Complex> coeffs() const;
  std::span<Complex> coeffs();

  Field to_spectral() const;
  Field to_real() const;

 private:
  Field(const Grid2D& grid, Space space) : grid_(grid), space_(space) {}

  Grid2D grid_;
  Space space_;
  std::vector<double> values_;
  std::vector<Complex> coeffs_;
};

// Fraction of total spectral energy tolerated on the xi = 0 column by the
// negative-order multipliers before they refuse the input.
inline constexpr double kZeroColumnTolerance = 1e-12;

// |xi|^s. s > 0 annihilates the xi = 0 column; s < 0 requires that column to
// be empty (ConstraintViolation otherwise) and forces it to zero.
Field frac_deriv_x(const Field& u, double s);
// |eta|^s, mirror of frac_deriv_x.
Field frac_deriv_y(const Field& u, double s);
// Multiplier eta / xi, i.e. d_x^{-1} d_y. The xi = 0 column is dropped; the
// L2-squared norm of d_y applied to that column is added to *discarded.
Field antideriv_x_deriv_y(const Field& u, double* discarded = nullptr);
// (1 + xi^2)^{s/2}.
Field bessel_x(const Field& u, double s);
Field deriv_x(const Field& u);
Field deriv_y(const Field& u);
// Zeroes modes with 3|m| > n in either direction.
Field dealias_23(const Field& u);

double norm_l2(const Field& u);
double norm_linf(const Field& u);
// ||u||_Linf + ||d_x u||_Linf.
double norm_w1inf_x(const Field& u);
// (||J_x^s u||^2 + ||d_x^{-1} d_y u||^2)^{1/2}.
double norm_xs(const Field& u, double s);
// L2 norm of (1 + xi^2)^{s1/2} (1 + eta^2)^{s2/2} u^.
double norm_hs1s2(const Field& u, double s1, double s2);
// Integral of u over the box, lx * ly * c_00.
double mass(const Field& u);

// Snapshot format: one ASCII header line
//   FKPFIELD v1 <nx> <ny> <lx> <ly> <real|spectral>\n
// followed by nx*ny little-endian float64 values (real space) or nx*ny
// interleaved (re, im) pairs (spectral, FFT order), row-major, x slowest.
void save_field(const std::string& path, const Field& u);
Field load_field(const std::string& path);

}  // namespace fkp
