#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fkp/spectral.hpp"

namespace fkp {

struct CriticalExponents {
  double s_alpha = 0.0;              // 2 - alpha / 4
  double l2_critical = 4.0 / 3.0;
  double energy_critical = 0.8;
  double l2_scaling_exponent = 0.0;  // (3 alpha - 4) / 4
};

// alpha in (0, 2].
CriticalExponents critical_exponents(double alpha);

struct GnRatio {
  double ratio = 0.0;  // ||f||_3^3 over the right-hand side
  double lhs = 0.0;
  double rhs = 0.0;
  bool in_lemma_range = false;  // alpha in [4/5, 1)
  double discarded = 0.0;       // xi = 0 column energy ignored by d_x^{-1} d_y
};

// ||f||_3^3 <= c ||f||_2^{(5a-4)/(a+2)} ||f||_{H_x^{a/2}}^{(18-5a)/(2(a+2))} ||d_x^{-1} f_y||_2^{1/2}.
// DomainError when a right-hand factor vanishes.
GnRatio gn_ratio(const Field& f, double alpha);

struct GnScanRow {
  double a, b, ratio;
};

struct GnScan {
  std::vector<GnScanRow> rows;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  std::string to_csv() const;  // "a,b,ratio"
};

// f(a x, b y) for a, b in {2^-3, ..., 2^3}: same samples on the box (lx / a, ly / b).
GnScan gn_dilation_scan(const Field& f, double alpha, int min_pow = -3, int max_pow = 3);

struct DecayOptions {
  long max_panels = 4'000'000;
  bool conjugate = false;  // integrand with every phase sign flipped
};

struct DecayValue {
  double lambda = 0.0;
  Complex J;
  double R = 0.0;
  long panels = 0;
  bool flagged = false;  // panel budget exceeded
};

// J(lambda) = int |xi|^{(alpha-1)/2} exp(i sgn(xi) pi/4) exp(i lambda xi) exp(i xi |xi|^alpha) dxi
// over |xi| <= R, cosine taper on [R/2, R]. Panels are refined geometrically
// toward 0 and kept narrower than 2 pi / (5 |phase'|), 6 nodes each.
DecayValue decay_J(double lambda, double alpha, double R, const DecayOptions& opt = {});

struct DecayRow {
  double lambda;
  DecayValue at_R, at_2R;
};

struct DecayScan {
  double alpha = 0.0;
  double R = 0.0;
  std::vector<DecayRow> rows;
  double sup_abs = 0.0;
  double sup_lambda = 0.0;
  double max_rel_change = 0.0;  // max over lambda of |J_R - J_2R| / sup |J_R|
  bool stable = false;          // max_rel_change < 0.05
  bool edge_growth = false;
  bool flagged = false;
  // "lambda,reJ,imJ,absJ,R,flag", both R and 2R rows.
  std::string to_csv() const;
};

// Edge growth: the largest |J| in the outer tenth of the lambda range on either
// side exceeds 1.25 times the largest in the adjacent tenth, each tenth sampled
// densely as well as at the grid points.
DecayScan decay_scan(double alpha, const std::vector<double>& lambdas, double R,
                     const DecayOptions& opt = {});

// ||d_x u||_Linf / ||u||_{X^s}; s > 4.
double embedding_ratio(const Field& u, double s);

struct EmbeddingEnsemble {
  double s = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
};

// Real random fields on a (2 pi)^2 box, 64 x 64 nodes, Gaussian coefficients on
// 1 <= |k_x| <= max_mode, |k_y| <= max_mode.
Field random_band_limited(std::uint64_t seed, int max_mode = 16, int n = 64);
EmbeddingEnsemble embedding_ensemble(double s, int draws = 100, std::uint64_t seed = 1,
                                     int max_mode = 16);

}  // namespace fkp
