#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fkp/spectral.hpp"
#include "fkp/symbols.hpp"

namespace fkp {

struct SolverConfig {
  KPSymbol symbol;
  double dt = 1e-3;
  double t_end = 1.0;
  int snapshot_every = 0;  // steps between snapshots, 0 disables them
  bool dealias = true;
  int diagnostics_every = 1;
  double xs_order = 1.0;
  bool linear_only = false;
};

// Throws InvalidArgument for a malformed configuration.
void validate(const SolverConfig& cfg);

struct DiagnosticsSeries {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> l2;
  std::vector<double> hamiltonian;  // NaN where the Hamiltonian is not defined
  std::vector<double> xs_norm;
  std::vector<double> w1inf;

  std::size_t size() const { return times.size(); }
  // Header "t,mass,l2,hamiltonian,xs,w1inf", 17 significant digits.
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

// Zeroes the (xi = 0, eta != 0) coefficients and the x-Nyquist column, the
// subspace on which d_x^{-1} and the linear group are defined. The removed
// L2-squared energy is added to *discarded.
Field project_invariant(const Field& u, double* discarded = nullptr);

// exp(i t omega(xi, eta)) applied to the projected data.
Field linear_propagate(const Field& u0, const KPSymbol& symbol, double t,
                       double* discarded = nullptr);

// Integrating-factor RK4 for u_t = i omega u - (1/2) d_x (u^2) in Fourier
// space: the linear factor is applied exactly, RK4 integrates the rest.
class IfRk4Stepper {
 public:
  // dt may be negative (backward stepping).
  IfRk4Stepper(const Grid2D& grid, const KPSymbol& symbol, double dt, bool dealias = true,
               bool linear_only = false);

  double dt() const { return dt_; }
  // 2.8 / max |omega| over the retained lattice; advisory only.
  double advisory_dt() const { return advisory_dt_; }
  // Largest |xi| the nonlinearity can excite.
  double max_active_xi() const { return max_xi_; }

  // Advances spectral coefficients in place. Throws BlowUp on non-finite data
  // or when max|u| max|xi| |dt| exceeds 1 (time_reached set to 0; run() fixes it).
  void advance(std::vector<Complex>& coeffs) const;
  Field step(const Field& u) const;

  // -(1/2) d_x dealias(u^2) for the given coefficients. Also returns max|u|.
  std::vector<Complex> nonlinear(const std::vector<Complex>& coeffs, double* max_abs_u = nullptr) const;

 private:
  Grid2D grid_;
  double dt_;
  bool linear_only_;
  double advisory_dt_ = 0.0;
  double max_xi_ = 0.0;
  std::vector<Complex> half_;  // exp(i omega dt / 2)
  std::vector<Complex> full_;  // exp(i omega dt)
  std::vector<Complex> nl_;    // -(1/2) i xi on retained modes, 0 elsewhere
};

// One integrating-factor RK4 step with cfg.dt. Output is spectral.
Field step_ifrk4(const Field& u, const SolverConfig& cfg);

struct RunResult {
  DiagnosticsSeries diagnostics;
  Field final_state;
  bool blew_up = false;
  double t_reached = 0.0;
  std::string message;
  double dt_used = 0.0;  // dt shrunk, if needed, so that t_end is hit exactly
  long steps = 0;
  double advisory_dt = 0.0;
  double discarded_energy = 0.0;  // removed by the ingestion projection
};

using SnapshotSink = std::function<void(long step, double t, const Field& u)>;

// Evolves u0 to cfg.t_end. Snapshots go to sink every cfg.snapshot_every steps
// (including step 0 and the final step). On blow-up the run stops, keeps the
// diagnostics gathered so far and reports blew_up = true instead of throwing.
RunResult run(const Field& u0, const SolverConfig& cfg, const SnapshotSink& sink = {});

// H(u) = 1/2 ||D_x^{alpha/2} u||^2 - kappa/2 ||d_x^{-1} d_y u||^2 - 1/6 int u^3,
// defined for the pure power family only (nullopt otherwise).
std::optional<double> hamiltonian(const Field& u, const KPSymbol& symbol);

// u_lambda(x, y) = lambda^alpha u(lambda x, lambda^{(alpha+2)/2} y), realised on
// the box (lx / lambda, ly / lambda^{(alpha+2)/2}) with the same node count.
Field scaling_transform(const Field& u, double lambda, double alpha);

struct ScalingReport {
  double lambda = 1.0;
  double t = 0.0;          // time of the unscaled run
  double t_scaled = 0.0;   // t / lambda^{alpha+1}
  double discrepancy = 0.0;  // relative L2 gap, evolved-then-scaled vs scaled-then-evolved
  bool blew_up = false;
};

// Requires a pure power symbol.
ScalingReport verify_scaling(const Field& u0, const SolverConfig& cfg, double lambda);

// 3c sech^2(sqrt(c)/2 (x - x0 - c t)), periodised over the box: the alpha = 2
// line soliton, constant in y.
Field soliton(const Grid2D& grid, double c, double x0, double t = 0.0);

// amplitude exp(-r^2 / (2 width^2)) centred in the box.
Field gaussian_bump(const Grid2D& grid, double amplitude, double width);

}  // namespace fkp
