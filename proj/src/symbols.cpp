#include "fkp/symbols.hpp"

#include <algorithm>
#include <boost/math/special_functions/fpclassify.hpp>  // pchip.hpp uses isnan unqualified
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fkp/error.hpp"

namespace fkp {

const char* to_string(SymbolKind k) {
  switch (k) {
    case SymbolKind::pure_power: return "power";
    case SymbolKind::ilw: return "ilw";
    case SymbolKind::whitham_st: return "whitham";
    case SymbolKind::table: return "table";
  }
  return "?";
}

struct SymbolFamily::Table {
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  Table(std::vector<double> x, std::vector<double> y)
      : x_last(x.back()), y_last(y.back()), interp(std::move(x), std::move(y)) {
    slope_last = interp.prime(x_last);
  }
  double eval(double a) const {
    if (a <= x_last) return interp(a);
    return y_last + slope_last * (a - x_last);
  }
  double x_last;
  double y_last;
  double slope_last = 0.0;
  Pchip interp;
};

SymbolFamily SymbolFamily::pure_power(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidArgument("pure power symbol needs alpha in (0, 2]");
  SymbolFamily f;
  f.kind_ = SymbolKind::pure_power;
  f.alpha_ = alpha;
  return f;
}

SymbolFamily SymbolFamily::ilw(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("ILW depth must be positive");
  SymbolFamily f;
  f.kind_ = SymbolKind::ilw;
  f.alpha_ = 1.0;
  f.delta_ = delta;
  return f;
}

SymbolFamily SymbolFamily::whitham_st(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("surface tension coefficient must be positive");
  SymbolFamily f;
  f.kind_ = SymbolKind::whitham_st;
  f.alpha_ = 0.5;
  f.b_ = b;
  return f;
}

SymbolFamily SymbolFamily::table(std::vector<double> xi, std::vector<double> w, double alpha) {
  if (xi.size() != w.size() || xi.size() < 2) throw InvalidArgument("symbol table needs >= 2 (xi, w) pairs");
  if (!(xi.front() > 0.0)) throw InvalidArgument("symbol table xi samples must be positive");
  for (std::size_t k = 1; k < xi.size(); ++k) {
    if (!(xi[k] > xi[k - 1])) throw InvalidArgument("symbol table xi samples must be strictly increasing");
  }
  for (double v : w) {
    if (!std::isfinite(v)) throw InvalidArgument("symbol table w samples must be finite");
  }
  if (!(alpha > 0.0)) throw InvalidArgument("symbol table alpha must be positive");
  xi.insert(xi.begin(), 0.0);
  w.insert(w.begin(), 0.0);
  SymbolFamily f;
  f.kind_ = SymbolKind::table;
  f.alpha_ = alpha;
  f.table_ = std::make_shared<const Table>(std::move(xi), std::move(w));
  return f;
}

SymbolFamily SymbolFamily::table_from_csv(const std::string& path, double alpha) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open symbol table " + path);
  std::string line;
  std::vector<double> xs, ws;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("xi", 0) == 0) continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x = 0.0, v = 0.0;
    if (!(ls >> x >> v)) throw IoError(path + ": malformed row '" + line + "'");
    xs.push_back(x);
    ws.push_back(v);
  }
  return table(std::move(xs), std::move(ws), alpha);
}

double SymbolFamily::w_positive(double a) const {
  switch (kind_) {
    case SymbolKind::pure_power:
      return std::pow(a, alpha_ + 1.0);
    case SymbolKind::ilw: {
      const double z = delta_ * a;
      if (z < 1e-3) {
        const double d3 = delta_ * delta_ * delta_;
        return a / delta_ + delta_ * a * a * a / 3.0 - d3 * std::pow(a, 5) / 45.0;
      }
      return a * a / std::tanh(z);
    }
    case SymbolKind::whitham_st: {
      const double th = a < 1e-3 ? 1.0 - a * a / 3.0 + 2.0 * std::pow(a, 4) / 15.0 : std::tanh(a) / a;
      return std::sqrt(th) * std::sqrt(1.0 + b_ * a * a) * a;
    }
    case SymbolKind::table:
      return table_->eval(a);
  }
  return 0.0;
}

double SymbolFamily::w(double xi) const {
  const double v = w_positive(std::abs(xi));
  return xi < 0.0 ? -v : v;
}

double SymbolFamily::dw(double xi, int order) const {
  if (order == 0) return w(xi);
  if (order != 1 && order != 2) throw InvalidArgument("dw supports orders 0, 1, 2");
  const double a = std::abs(xi);
  const double sgn = xi < 0.0 ? -1.0 : 1.0;
  if (kind_ == SymbolKind::pure_power) {
    if (order == 1) return (alpha_ + 1.0) * std::pow(a, alpha_);
    return sgn * alpha_ * (alpha_ + 1.0) * std::pow(a, alpha_ - 1.0);
  }
  if (kind_ == SymbolKind::ilw && delta_ * a > 1e-3) {
    const double z = delta_ * a;
    const double coth = 1.0 / std::tanh(z);
    const double csch2 = 1.0 / (std::sinh(z) * std::sinh(z));
    // w = a^2 coth(delta a) on a > 0; w' is even, w'' odd.
    if (order == 1) return 2.0 * a * coth - delta_ * a * a * csch2;
    return sgn * (2.0 * coth - 4.0 * delta_ * a * csch2 + 2.0 * delta_ * delta_ * a * a * csch2 * coth);
  }
  const double h = std::max(a, 1e-8) * 1e-5;
  if (order == 1) return (w(xi + h) - w(xi - h)) / (2.0 * h);
  return (w(xi + h) - 2.0 * w(xi) + w(xi - h)) / (h * h);
}

KPSymbol::KPSymbol(SymbolFamily family, int kappa) : family_(std::move(family)), kappa_(kappa) {
  if (kappa != 1 && kappa != -1) throw InvalidArgument("kappa must be +1 (fKP-II) or -1 (fKP-I)");
}

double KPSymbol::omega(double xi, double eta) const {
  if (xi == 0.0) return 0.0;
  return family_.w(xi) - kappa_ * eta * eta / xi;
}

HypothesisReport validate_hypotheses(const SymbolFamily& f, double alpha, double xi0,
                                     HypothesisBand band) {
  if (!(xi0 > 0.0)) throw InvalidArgument("validate_hypotheses needs xi0 > 0");
  HypothesisReport r;
  r.xi0 = xi0;
  r.alpha = alpha;
  r.band = band;

  constexpr int kLowSamples = 241;
  for (int k = 0; k < kLowSamples; ++k) {
    const double a = xi0 * std::pow(10.0, -6.0 * k / (kLowSamples - 1));
    r.max_abs_w_low = std::max({r.max_abs_w_low, std::abs(f.w(a)), std::abs(f.w(-a))});
  }

  constexpr int kHighSamples = 301;
  r.ratio_min.fill(std::numeric_limits<double>::infinity());
  r.ratio_max.fill(0.0);
  for (int k = 0; k < kHighSamples; ++k) {
    const double a = xi0 * std::pow(10.0, 3.0 * k / (kHighSamples - 1));
    for (int beta = 0; beta < 3; ++beta) {
      for (double xi : {a, -a}) {
        const double ratio = std::abs(f.dw(xi, beta)) / std::pow(a, alpha + 1.0 - beta);
        r.ratio_min[beta] = std::min(r.ratio_min[beta], ratio);
        r.ratio_max[beta] = std::max(r.ratio_max[beta], ratio);
      }
    }
  }

  r.pass = std::isfinite(r.max_abs_w_low) && r.max_abs_w_low <= band.hi;
  for (int beta = 0; beta < 3; ++beta) {
    r.pass = r.pass && r.ratio_min[beta] >= band.lo && r.ratio_max[beta] <= band.hi;
  }
  return r;
}

}  // namespace fkp
