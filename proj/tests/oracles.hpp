#pragma once
// Independent reference computations used by the tests. Nothing here calls
// into the FFT wrapper; transforms are direct O(n^2) sums.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

inline int mode(int i, int n) { return i < n / 2 ? i : i - n; }

// Coefficients c[i*ny+j] with u(x_p, y_q) = sum c exp(i(kx x + ky y)).
inline std::vector<cplx> dft2(const std::vector<double>& u, int nx, int ny) {
  std::vector<cplx> c(u.size());
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      cplx s = 0.0;
      for (int p = 0; p < nx; ++p)
        for (int q = 0; q < ny; ++q) {
          const double ph = -2.0 * pi * (double(i) * p / nx + double(j) * q / ny);
          s += u[p * ny + q] * cplx(std::cos(ph), std::sin(ph));
        }
      c[i * ny + j] = s / double(nx * ny);
    }
  return c;
}

inline std::vector<double> idft2(const std::vector<cplx>& c, int nx, int ny) {
  std::vector<double> u(c.size());
  for (int p = 0; p < nx; ++p)
    for (int q = 0; q < ny; ++q) {
      cplx s = 0.0;
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
          const double ph = 2.0 * pi * (double(i) * p / nx + double(j) * q / ny);
          s += c[i * ny + j] * cplx(std::cos(ph), std::sin(ph));
        }
      u[p * ny + q] = s.real();
    }
  return u;
}

// Applies m(kx, ky) coefficientwise; Nyquist modes are dropped, as the
// library does for odd multipliers.
inline std::vector<double> apply_multiplier(const std::vector<double>& u, int nx, int ny, double lx, double ly,
                                            const std::function<cplx(double, double)>& m) {
  auto c = dft2(u, nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double kx = 2.0 * pi * mode(i, nx) / lx, ky = 2.0 * pi * mode(j, ny) / ly;
      c[i * ny + j] *= m(kx, ky);
    }
  return idft2(c, nx, ny);
}

inline double l2(const std::vector<double>& u, double cell) {
  double s = 0.0;
  for (double v : u) s += v * v;
  return std::sqrt(s * cell);
}

inline std::vector<double> sample(int nx, int ny, double lx, double ly, const std::function<double(double, double)>& f) {
  std::vector<double> u(std::size_t(nx) * ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) u[i * ny + j] = f(i * lx / nx, j * ly / ny);
  return u;
}

// Smooth random trigonometric polynomial with modes |m| <= kmax in each direction.
inline std::vector<double> random_trig(int nx, int ny, double lx, double ly, int kmax, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n01;
  struct Term { int a, b; double c, s; };
  std::vector<Term> terms;
  for (int a = 0; a <= kmax; ++a)
    for (int b = -kmax; b <= kmax; ++b) terms.push_back({a, b, n01(rng), n01(rng)});
  return sample(nx, ny, lx, ly, [&](double x, double y) {
    double v = 0.0;
    for (const auto& t : terms) {
      const double ph = 2.0 * pi * (t.a * x / lx + t.b * y / ly);
      v += (t.c * std::cos(ph) + t.s * std::sin(ph)) / (1.0 + t.a * t.a + t.b * t.b);
    }
    return v;
  });
}

// One integrating-factor RK4 step for u_t + u u_x - D^alpha u_x = 0 on a
// periodic line: u^_t = i w(xi) u^ - (i xi / 2) (u^2)^, with 2/3 truncation of
// the nonlinear term and the Nyquist mode removed.
struct KdvLine {
  int n;
  double L, dt, alpha;

  std::vector<cplx> dft(const std::vector<double>& u) const {
    std::vector<cplx> c(n);
    for (int k = 0; k < n; ++k) {
      cplx s = 0.0;
      for (int p = 0; p < n; ++p) s += u[p] * std::polar(1.0, -2.0 * pi * double(k) * p / n);
      c[k] = s / double(n);
    }
    return c;
  }
  std::vector<double> idft(const std::vector<cplx>& c) const {
    std::vector<double> u(n);
    for (int p = 0; p < n; ++p) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += c[k] * std::polar(1.0, 2.0 * pi * double(k) * p / n);
      u[p] = s.real();
    }
    return u;
  }
  double xi(int k) const { return 2.0 * pi * mode(k, n) / L; }
  double w(double x) const { return std::pow(std::abs(x), alpha) * x; }
  std::vector<cplx> nonlinear(const std::vector<cplx>& c) const {
    auto u = idft(c);
    for (double& v : u) v *= v;
    auto q = dft(u);
    for (int k = 0; k < n; ++k) {
      const bool keep = 3 * std::abs(mode(k, n)) <= n && k != n / 2;
      q[k] = keep ? cplx(0.0, -0.5 * xi(k)) * q[k] : 0.0;
    }
    return q;
  }
  std::vector<double> step(const std::vector<double>& u0) const {
    auto c = dft(u0);
    c[n / 2] = 0.0;
    std::vector<cplx> e1(n), e2(n);
    for (int k = 0; k < n; ++k) {
      e1[k] = std::polar(1.0, 0.5 * dt * w(xi(k)));
      e2[k] = e1[k] * e1[k];
    }
    auto k1 = nonlinear(c);
    std::vector<cplx> s(n);
    for (int k = 0; k < n; ++k) s[k] = e1[k] * (c[k] + 0.5 * dt * k1[k]);
    auto k2 = nonlinear(s);
    for (int k = 0; k < n; ++k) s[k] = e1[k] * c[k] + 0.5 * dt * k2[k];
    auto k3 = nonlinear(s);
    for (int k = 0; k < n; ++k) s[k] = e2[k] * c[k] + dt * e1[k] * k3[k];
    auto k4 = nonlinear(s);
    for (int k = 0; k < n; ++k)
      c[k] = e2[k] * c[k] + dt / 6.0 * (e2[k] * k1[k] + 2.0 * e1[k] * (k2[k] + k3[k]) + k4[k]);
    return idft(c);
  }
};

}  // namespace oracle
