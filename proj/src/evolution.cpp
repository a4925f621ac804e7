#include "fkp/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "fft.hpp"
#include "fkp/error.hpp"

namespace fkp {

void validate(const SolverConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidArgument("dt must be positive");
  if (!(cfg.t_end >= cfg.dt) || !std::isfinite(cfg.t_end)) throw InvalidArgument("t_end must be >= dt");
  if (cfg.snapshot_every < 0) throw InvalidArgument("snapshot_every must be >= 0");
  if (cfg.diagnostics_every < 1) throw InvalidArgument("diagnostics_every must be >= 1");
}

std::string DiagnosticsSeries::to_csv() const {
  std::string out = "t,mass,l2,hamiltonian,xs,w1inf\n";
  char buf[512];
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", times[k], mass[k], l2[k],
                  hamiltonian[k], xs_norm[k], w1inf[k]);
    out += buf;
  }
  return out;
}

void DiagnosticsSeries::write_csv(const std::string& path) const {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << to_csv();
  if (!os) throw IoError("write failed for " + path);
}

Field project_invariant(const Field& u, double* discarded) {
  Field s = u.to_spectral();
  const Grid2D& g = s.grid();
  auto c = s.coeffs();
  double removed = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) {
      const bool drop = (g.mode_x(i) == 0 && g.mode_y(j) != 0) || g.nyquist_x(i);
      if (!drop) continue;
      Complex& z = c[g.index(i, j)];
      removed += std::norm(z);
      z = 0.0;
    }
  }
  if (discarded != nullptr) *discarded += g.lx() * g.ly() * removed;
  return s;
}

Field linear_propagate(const Field& u0, const KPSymbol& symbol, double t, double* discarded) {
  Field s = project_invariant(u0, discarded);
  const Grid2D& g = s.grid();
  auto c = s.coeffs();
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) {
      const double phase = t * symbol.omega(g.kx(i), g.ky(j));
      c[g.index(i, j)] *= Complex(std::cos(phase), std::sin(phase));
    }
  }
  return s;
}

IfRk4Stepper::IfRk4Stepper(const Grid2D& grid, const KPSymbol& symbol, double dt, bool dealias,
                           bool linear_only)
    : grid_(grid), dt_(dt), linear_only_(linear_only) {
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgument("stepper needs a finite nonzero dt");
  const std::size_t n = grid.size();
  half_.resize(n);
  full_.resize(n);
  nl_.assign(n, Complex{});
  double max_omega = 0.0;
  for (int i = 0; i < grid.nx(); ++i) {
    const bool cut_x = dealias && 3 * std::abs(grid.mode_x(i)) > grid.nx();
    for (int j = 0; j < grid.ny(); ++j) {
      const std::size_t k = grid.index(i, j);
      const bool retained = !((grid.mode_x(i) == 0 && grid.mode_y(j) != 0) || grid.nyquist_x(i));
      const double om = symbol.omega(grid.kx(i), grid.ky(j));
      if (retained) max_omega = std::max(max_omega, std::abs(om));
      half_[k] = std::polar(1.0, 0.5 * dt * om);
      full_[k] = std::polar(1.0, dt * om);
      const bool cut = cut_x || (dealias && 3 * std::abs(grid.mode_y(j)) > grid.ny());
      if (retained && !cut) {
        nl_[k] = Complex(0.0, -0.5 * grid.kx(i));
        max_xi_ = std::max(max_xi_, std::abs(grid.kx(i)));
      }
    }
  }
  advisory_dt_ = max_omega > 0.0 ? 2.8 / max_omega : std::numeric_limits<double>::infinity();
}

std::vector<Complex> IfRk4Stepper::nonlinear(const std::vector<Complex>& coeffs,
                                             double* max_abs_u) const {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  std::vector<Complex> phys(coeffs.size());
  detail::fft_inverse_c(nx, ny, coeffs, phys);
  double umax = 0.0;
  for (auto& z : phys) {
    const double u = z.real();
    umax = std::max(umax, std::abs(u));
    z = Complex(u * u, 0.0);
  }
  std::vector<Complex> out(coeffs.size());
  detail::fft_forward_c(nx, ny, phys, out);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= nl_[k];
  if (max_abs_u != nullptr) *max_abs_u = umax;
  return out;
}

void IfRk4Stepper::advance(std::vector<Complex>& c) const {
  const std::size_t n = c.size();
  if (linear_only_) {
    for (std::size_t k = 0; k < n; ++k) c[k] *= full_[k];
  } else {
    double umax = 0.0;
    const auto k1 = nonlinear(c, &umax);
    if (!std::isfinite(umax)) throw BlowUp("non-finite solution values", 0.0);
    if (umax * max_xi_ * std::abs(dt_) > 1.0) {
      throw BlowUp("nonlinear CFL violated: max|u| max|xi| dt = " +
                       std::to_string(umax * max_xi_ * std::abs(dt_)),
                   0.0);
    }
    const double h = dt_;
    std::vector<Complex> stage(n);
    for (std::size_t k = 0; k < n; ++k) stage[k] = half_[k] * (c[k] + 0.5 * h * k1[k]);
    const auto k2 = nonlinear(stage);
    for (std::size_t k = 0; k < n; ++k) stage[k] = half_[k] * c[k] + 0.5 * h * k2[k];
    const auto k3 = nonlinear(stage);
    for (std::size_t k = 0; k < n; ++k) stage[k] = full_[k] * c[k] + h * half_[k] * k3[k];
    const auto k4 = nonlinear(stage);
    for (std::size_t k = 0; k < n; ++k) {
      c[k] = full_[k] * c[k] +
             (h / 6.0) * (full_[k] * k1[k] + 2.0 * half_[k] * (k2[k] + k3[k]) + k4[k]);
    }
  }
  for (const auto& z : c) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw BlowUp("non-finite coefficients", 0.0);
  }
}

Field IfRk4Stepper::step(const Field& u) const {
  Field s = u.to_spectral();
  std::vector<Complex> c(s.coeffs().begin(), s.coeffs().end());
  advance(c);
  return Field::spectral(grid_, std::move(c));
}

Field step_ifrk4(const Field& u, const SolverConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw InvalidArgument("dt must be positive");
  IfRk4Stepper stepper(u.grid(), cfg.symbol, cfg.dt, cfg.dealias, cfg.linear_only);
  return stepper.step(project_invariant(u));
}

namespace {

void record(DiagnosticsSeries& d, double t, const Field& s, const SolverConfig& cfg) {
  d.times.push_back(t);
  d.mass.push_back(mass(s));
  d.l2.push_back(norm_l2(s));
  d.hamiltonian.push_back(hamiltonian(s, cfg.symbol).value_or(std::numeric_limits<double>::quiet_NaN()));
  d.xs_norm.push_back(norm_xs(s, cfg.xs_order));
  d.w1inf.push_back(norm_w1inf_x(s));
}

}  // namespace

RunResult run(const Field& u0, const SolverConfig& cfg, const SnapshotSink& sink) {
  validate(cfg);
  RunResult r{{}, Field::zeros(u0.grid(), Space::spectral), false, 0.0, {}};
  Field s = project_invariant(u0, &r.discarded_energy);
  if (cfg.dealias && !cfg.linear_only) {
    const double before = norm_l2(s);
    s = dealias_23(s);
    const double after = norm_l2(s);
    r.discarded_energy += before * before - after * after;
  }

  long n = std::lround(cfg.t_end / cfg.dt);
  if (n < 1 || std::abs(n * cfg.dt - cfg.t_end) > 1e-12 * cfg.t_end) {
    n = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
  }
  r.dt_used = cfg.t_end / n;

  const Grid2D& g = s.grid();
  IfRk4Stepper stepper(g, cfg.symbol, r.dt_used, cfg.dealias, cfg.linear_only);
  r.advisory_dt = stepper.advisory_dt();
  if (!cfg.linear_only) {
    const double cfl = norm_linf(s) * stepper.max_active_xi() * r.dt_used;
    if (cfl > 1.0) {
      throw InvalidArgument("nonlinear CFL violated at t = 0: max|u| max|xi| dt = " + std::to_string(cfl));
    }
  }

  std::vector<Complex> c(s.coeffs().begin(), s.coeffs().end());
  record(r.diagnostics, 0.0, s, cfg);
  if (sink && cfg.snapshot_every > 0) sink(0, 0.0, s);

  for (long k = 1; k <= n; ++k) {
    try {
      stepper.advance(c);
    } catch (const BlowUp& e) {
      r.blew_up = true;
      r.t_reached = (k - 1) * r.dt_used;
      r.message = std::string(e.what()) + " at t = " + std::to_string(r.t_reached);
      break;
    }
    r.steps = k;
    r.t_reached = k * r.dt_used;
    const bool last = k == n;
    const bool want_diag = k % cfg.diagnostics_every == 0 || last;
    const bool want_snap = sink && cfg.snapshot_every > 0 && (k % cfg.snapshot_every == 0 || last);
    if (want_diag || want_snap) {
      Field cur = Field::spectral(g, c);
      if (want_diag) record(r.diagnostics, r.t_reached, cur, cfg);
      if (want_snap) sink(k, r.t_reached, cur);
    }
  }
  r.final_state = Field::spectral(g, std::move(c));
  return r;
}

std::optional<double> hamiltonian(const Field& u, const KPSymbol& symbol) {
  if (symbol.family().kind() != SymbolKind::pure_power) return std::nullopt;
  const double alpha = symbol.family().alpha();
  const double d = norm_l2(frac_deriv_x(u, 0.5 * alpha));
  const double t = norm_l2(antideriv_x_deriv_y(u));
  const Field r = u.to_real();
  double cubic = 0.0;
  for (double v : r.values()) cubic += v * v * v;
  cubic *= r.grid().cell_area();
  return 0.5 * d * d - 0.5 * symbol.kappa() * t * t - cubic / 6.0;
}

Field scaling_transform(const Field& u, double lambda, double alpha) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("scaling needs a finite lambda > 0");
  if (!(alpha > 0.0)) throw InvalidArgument("scaling needs alpha > 0");
  const Grid2D& g = u.grid();
  const double ly_scale = std::pow(lambda, 0.5 * (alpha + 2.0));
  const double lx = g.lx() / lambda;
  const double ly = g.ly() / ly_scale;
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw InvalidArgument("rescaled box is not representable");
  }
  const Grid2D scaled = Grid2D::make(g.nx(), g.ny(), lx, ly);
  // Node i of the new box sits at x_i / lambda, so u(lambda x) is sampled exactly.
  const Field r = u.to_real();
  const double amp = std::pow(lambda, alpha);
  std::vector<double> v(r.values().begin(), r.values().end());
  for (double& x : v) x *= amp;
  return Field::real(scaled, std::move(v));
}

ScalingReport verify_scaling(const Field& u0, const SolverConfig& cfg, double lambda) {
  if (cfg.symbol.family().kind() != SymbolKind::pure_power) {
    throw InvalidArgument("scaling symmetry holds for the pure power symbol only");
  }
  validate(cfg);
  const double alpha = cfg.symbol.family().alpha();
  const double time_scale = std::pow(lambda, alpha + 1.0);

  ScalingReport rep;
  rep.lambda = lambda;
  rep.t = cfg.t_end;
  rep.t_scaled = cfg.t_end / time_scale;

  const RunResult a = run(u0, cfg);
  SolverConfig scaled_cfg = cfg;
  // Same number of steps on the rescaled clock.
  scaled_cfg.dt = a.dt_used / time_scale;
  scaled_cfg.t_end = rep.t_scaled;
  const RunResult b = run(scaling_transform(u0, lambda, alpha), scaled_cfg);
  rep.blew_up = a.blew_up || b.blew_up;

  const Field lhs = scaling_transform(a.final_state, lambda, alpha);
  const Field rhs = b.final_state.to_real();
  std::vector<double> diff(lhs.values().begin(), lhs.values().end());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= rhs.values()[k];
  const double denom = norm_l2(lhs);
  const double gap = norm_l2(Field::real(lhs.grid(), std::move(diff)));
  rep.discrepancy = denom > 0.0 ? gap / denom : gap;
  return rep;
}

Field soliton(const Grid2D& grid, double c, double x0, double t) {
  if (!(c > 0.0)) throw InvalidArgument("soliton speed must be positive");
  const double k = 0.5 * std::sqrt(c);
  const double centre = x0 + c * t;
  return Field::sample(grid, [&](double x, double) {
    double v = 0.0;
    for (int image = -3; image <= 3; ++image) {
      const double s = 1.0 / std::cosh(k * (x - centre + image * grid.lx()));
      v += s * s;
    }
    return 3.0 * c * v;
  });
}

Field gaussian_bump(const Grid2D& grid, double amplitude, double width) {
  if (!(width > 0.0)) throw InvalidArgument("bump width must be positive");
  const double xc = 0.5 * grid.lx(), yc = 0.5 * grid.ly();
  return Field::sample(grid, [&](double x, double y) {
    const double r2 = (x - xc) * (x - xc) + (y - yc) * (y - yc);
    return amplitude * std::exp(-0.5 * r2 / (width * width));
  });
}

}  // namespace fkp
