#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fkp {

enum class SymbolKind { pure_power, ilw, whitham_st, table };

const char* to_string(SymbolKind k);

// An odd dispersion law w(xi). Every family is evaluated on |xi| and the sign
// is applied afterwards, so w(-xi) == -w(xi) holds bit for bit.
class SymbolFamily {
 public:
  // |xi|^alpha xi, alpha in (0, 2].
  static SymbolFamily pure_power(double alpha);
  // xi^2 coth(delta xi), delta > 0. Behaves like alpha = 1 at high frequency.
  static SymbolFamily ilw(double delta);
  // (tanh xi / xi)^{1/2} (1 + b xi^2)^{1/2} xi, b > 0. Behaves like alpha = 1/2.
  static SymbolFamily whitham_st(double b);
  // Monotone cubic interpolation through (0, 0) and the samples, odd-extended.
  // xi must be strictly increasing and positive; alpha is the growth order the
  // caller attributes to the table.
  static SymbolFamily table(std::vector<double> xi, std::vector<double> w, double alpha);
  // CSV with header "xi,w".
  static SymbolFamily table_from_csv(const std::string& path, double alpha);

  SymbolKind kind() const { return kind_; }
  // Effective dispersion order (1 for ILW, 1/2 for Whitham).
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }
  double b() const { return b_; }

  double w(double xi) const;
  // d^order w / dxi^order for order in {0, 1, 2}; closed form for pure power
  // and ILW, central differences with step 1e-5 |xi| otherwise.
  double dw(double xi, int order) const;

 private:
  struct Table;

  SymbolFamily() = default;
  double w_positive(double a) const;

  SymbolKind kind_ = SymbolKind::pure_power;
  double alpha_ = 2.0;
  double delta_ = 0.0;
  double b_ = 0.0;
  std::shared_ptr<const Table> table_;
};

// omega(xi, eta) = w(xi) - kappa eta^2 / xi, zero on xi = 0.
// kappa = +1 selects fKP-II, kappa = -1 fKP-I.
class KPSymbol {
 public:
  KPSymbol(SymbolFamily family, int kappa);

  const SymbolFamily& family() const { return family_; }
  int kappa() const { return kappa_; }
  double omega(double xi, double eta) const;

 private:
  SymbolFamily family_;
  int kappa_;
};

struct HypothesisBand {
  double lo = 0.3;
  double hi = 3.5;
};

struct HypothesisReport {
  double xi0 = 0.0;
  double alpha = 0.0;
  // max |w| over a log grid of 0 < |xi| <= xi0
  double max_abs_w_low = 0.0;
  // min / max over |xi| in [xi0, 1e3 xi0] of |d^beta w| / |xi|^{alpha + 1 - beta}
  std::array<double, 3> ratio_min{};
  std::array<double, 3> ratio_max{};
  HypothesisBand band;
  bool pass = false;
};

HypothesisReport validate_hypotheses(const SymbolFamily& f, double alpha, double xi0,
                                     HypothesisBand band = {});

}  // namespace fkp
