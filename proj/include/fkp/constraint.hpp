#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fkp/spectral.hpp"
#include "fkp/symbols.hpp"

namespace fkp {

struct DtCriterion {
  double value = 0.0;             // ||(eta / xi) u0^||_{L2} over xi != 0 modes
  double zero_column_energy = 0.0;  // L2-squared energy on (xi = 0, eta != 0)
  bool flag = false;              // zero_column_energy is not negligible
};

// Relative threshold for the flag: zero_column_energy > 1e-12 ||u0||^2.
DtCriterion dt_criterion(const Field& u0);

enum class Taper { cosine, gaussian };

struct QuadratureSpec {
  double xi_min_exclusion = 1e-5;  // half-width of the band |xi| < eps left out
  double xi_max = 0.0;             // 0 selects 12 sigma
  int n_xi = 2048;                 // minimum panel count on (eps, xi_max)
  Taper taper = Taper::cosine;
  double taper_fraction = 0.1;     // outer part of [0, xi_max] that is tapered
  int order = 8;                   // Gauss-Legendre nodes per panel
  double refine_tol = 1e-3;        // relative, against the largest value
};

void validate(const QuadratureSpec& q);

enum class DatumKind {
  gaussian,     // A exp(-(xi^2 + eta^2) / (2 sigma^2))
  gaussian_dx,  // i xi times the above: the x-derivative, odd in x
};

struct GaussianDatum {
  DatumKind kind = DatumKind::gaussian;
  double amplitude = 1.0;
  double sigma = 2.0;

  // Closed forms of the datum and its x-integral at height y.
  double value(double x, double y) const;
  double x_mass(double y) const;
};

struct FreeSolution {
  std::vector<Complex> values;
  std::vector<double> refinement_change;  // |u - u_refined| per point
  double max_change = 0.0;
  bool flagged = false;
  std::size_t nodes = 0;  // xi nodes of the base rule
};

// u(x, y, t) = (2 pi)^{-2} int int exp(i t omega) u0^ exp(i(x xi + y eta)). The
// eta integral is Gaussian and done in closed form; xi uses tapered Gauss-Legendre
// panels sized to the local phase rate, excluding |xi| < eps. The refined rule
// halves eps and the panel widths.
FreeSolution free_solution_at(const GaussianDatum& datum, const KPSymbol& symbol,
                              const std::vector<std::pair<double, double>>& pts, double t,
                              const QuadratureSpec& q = {});

struct MassRow {
  double X = 0.0;
  Complex mass;           // int_{-X}^{X} u dx from point samples
  Complex mass_fourier;   // same from (2 pi)^{-2} int g^(xi) 2 sin(X xi) / xi
  double refinement_change = 0.0;
  bool flagged = false;
};

struct MassTable {
  double y = 0.0;
  double t = 0.0;
  std::vector<MassRow> rows;
  bool flagged = false;

  // Header "X,mass_real,mass_imag_residual,flag".
  std::string to_csv() const;
};

// X_list must be positive and strictly increasing.
MassTable generalized_x_mass(const GaussianDatum& datum, const KPSymbol& symbol, double y,
                             double t, const std::vector<double>& X_list,
                             const QuadratureSpec& q = {});

}  // namespace fkp
