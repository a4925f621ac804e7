#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fkp {

enum class Variant { fkp2, fkp1 };

const char* to_string(Variant v);
Variant parse_variant(const std::string& s);

// |xi1 + xi2|^alpha (xi1 + xi2) - |xi1|^alpha xi1 - |xi2|^alpha xi2, evaluated
// without cancellation when |xi1| << |xi2|.
double gamma1(double alpha, double xi1, double xi2);

// (eta1 xi2 - eta2 xi1)^2 / ((xi1 + xi2) xi1 xi2). DomainError on a zero denominator.
double gamma2(double xi1, double xi2, double eta1, double eta2);

// gamma1 + gamma2 for fkp2, gamma1 - gamma2 for fkp1.
double omega_res(Variant v, double alpha, double xi1, double xi2, double eta1, double eta2);

// A frequency rectangle stored as a base point plus offsets, so that boxes of
// width 1e-6 sitting at 1e8 keep their geometry exact.
struct Rect {
  double xi_base = 0.0, eta_base = 0.0;
  double xi_lo = 0.0, xi_hi = 0.0;    // offsets from xi_base
  double eta_lo = 0.0, eta_hi = 0.0;  // offsets from eta_base
  double amplitude = 0.0;

  double width() const { return xi_hi - xi_lo; }
  double height() const { return eta_hi - eta_lo; }
};

struct ResonanceTestData {
  Variant variant = Variant::fkp2;
  double alpha = 1.0;
  double N = 100.0;
  double theta = 0.01;
  double gamma = 0.0;
  double epsilon = 0.0;  // fkp2 only
  double s1 = 0.0, s2 = 0.0;
  Rect rect1, rect2;
  double norm1 = 0.0, norm2 = 0.0;  // H^{s1,s2} norms of the two data
};

// Requires N >= 10, 0 < theta <= 0.1 and alpha in (0, 2].
ResonanceTestData build_test_data(Variant v, double alpha, double N, double theta, double s1 = 0.0,
                                  double s2 = 0.0);

// sqrt(int int <xi>^{2 s1} <eta>^{2 s2} |A|^2) over the rectangle.
double rect_norm(const Rect& r, double s1, double s2);

struct BoundsReport {
  long n_samples = 0;
  std::uint64_t seed = 0;
  double gamma1_ratio_min = 0.0, gamma1_ratio_max = 0.0;  // |G1| / (gamma N^alpha)
  // |G2| / gamma^{2 eps - 1} for fkp2, |G2| / (gamma N^alpha) for fkp1
  double gamma2_ratio_min = 0.0, gamma2_ratio_max = 0.0;
  // fkp1: max |G1 - (1+alpha) N^alpha xi1| / (gamma^2 N^{alpha-1}) and
  //       max |G2 - (1+alpha) N^alpha xi1| / (N^{alpha/2} gamma^2)
  double gamma1_remainder_max = 0.0, gamma2_remainder_max = 0.0;
  double omega_max = 0.0;
};

BoundsReport resonance_bounds_check(const ResonanceTestData& d, long n_samples,
                                    std::uint64_t seed = 1);

// (exp(i t Omega) - 1) / Omega, with the series i t (1 + i z / 2 - z^2 / 6),
// z = t Omega, for |z| < 1e-4.
struct KernelValue {
  double re, im;
};
KernelValue picard_kernel(double omega, double t);

struct PicardOptions {
  int order = 8;          // Gauss-Legendre nodes per panel and direction
  double rel_tol = 5e-3;  // refinement stops once the norm moves less than this
  int max_level = 3;      // panels per cell = 2^level in each direction
  // Output region in rect2 offsets; defaults to the support of the product.
  std::optional<Rect> window;
};

struct PicardResult {
  double N = 0.0;
  double t = 0.0;
  double norm = 0.0;
  double ratio = 0.0;
  double omega_max = 0.0;
  double refinement_change = 0.0;  // relative change at the last doubling
  int level = 0;
  bool flagged = false;
};

PicardResult picard_second_norm(const ResonanceTestData& d, double t, const PicardOptions& opt = {});

struct ExponentFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares of log(ratio) on log(N). Needs >= 3 distinct N.
ExponentFit growth_exponent_fit(const std::vector<PicardResult>& results);

// 1 - 3 alpha / 4 for fkp2, 1 - 3 alpha / 8 for fkp1.
double predicted_exponent(Variant v, double alpha);

}  // namespace fkp
