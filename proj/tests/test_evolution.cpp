#include <cmath>
#include <limits>

#include "doctest.h"
#include "fkp/error.hpp"
#include "fkp/evolution.hpp"
#include "oracles.hpp"

using namespace fkp;

namespace {

double rel_diff(const Field& a, const Field& b) {
  const Field ra = a.to_real(), rb = b.to_real();
  std::vector<double> d(ra.values().begin(), ra.values().end());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] -= rb.values()[k];
  return norm_l2(Field::real(ra.grid(), d)) / norm_l2(rb);
}

double coeff_rel_err(const Field& a, const Field& b) {
  const Field sa = a.to_spectral(), sb = b.to_spectral();
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < sa.coeffs().size(); ++k) {
    num = std::max(num, std::abs(sa.coeffs()[k] - sb.coeffs()[k]));
    den = std::max(den, std::abs(sb.coeffs()[k]));
  }
  return num / den;
}

Field random_field(const Grid2D& g, unsigned seed, int kmax = 5, double scale = 1.0) {
  auto v = oracle::random_trig(g.nx(), g.ny(), g.lx(), g.ly(), kmax, seed);
  for (double& x : v) x *= scale;
  return Field::real(g, v);
}

SolverConfig config(double alpha, int kappa, double dt, double t_end) {
  SolverConfig c{KPSymbol(SymbolFamily::pure_power(alpha), kappa)};
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_CASE("linear group") {
  const auto g = Grid2D::make(32, 32, 10.0, 8.0);
  const auto u = random_field(g, 1);
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (int kappa : {1, -1}) {
      const KPSymbol s(SymbolFamily::pure_power(alpha), kappa);
      const Field p = project_invariant(u);
      CHECK(coeff_rel_err(linear_propagate(u, s, 0.0), p) == 0.0);
      for (double t : {0.3, 5.0, -2.0}) {
        CHECK(std::abs(norm_l2(linear_propagate(u, s, t)) / norm_l2(p) - 1.0) <= 1e-13);
      }
      const Field a = linear_propagate(linear_propagate(u, s, 0.7), s, 1.9);
      CHECK(coeff_rel_err(a, linear_propagate(u, s, 2.6)) <= 1e-12);
    }
  }
}

TEST_CASE("projection") {
  const auto g = Grid2D::make(16, 16, kTwoPi, kTwoPi);
  double discarded = 0.0;
  const auto gy = Field::sample(g, [](double x, double y) { return std::sin(y) + std::cos(x); });
  const auto p = project_invariant(gy, &discarded);
  CHECK(discarded == doctest::Approx(2 * kPi * kPi).epsilon(1e-12));
  CHECK(norm_l2(p) == doctest::Approx(std::sqrt(2.0) * kPi).epsilon(1e-12));
}

TEST_CASE("step") {
  const auto g = Grid2D::make(16, 16, 10.0, 10.0);
  const auto z = step_ifrk4(Field::zeros(g), config(2, 1, 0.01, 1));
  CHECK(norm_linf(z) == 0.0);

  // y-independent data: the transverse term drops out and the step is the
  // one-dimensional one
  const int nx = 64;
  const double L = 20.0;
  for (int kappa : {1, -1}) {
    const auto g2 = Grid2D::make(nx, 8, L, 3.0);
    auto prof = [&](double x) { return 0.8 * std::exp(-std::pow(x - 10.0, 2) / 2.0) + 0.1 * std::sin(kTwoPi * x / L); };
    const auto u = Field::sample(g2, [&](double x, double) { return prof(x); });
    const Field next = step_ifrk4(u, config(2, kappa, 0.01, 1)).to_real();
    std::vector<double> line(nx);
    for (int i = 0; i < nx; ++i) line[i] = prof(g2.x(i));
    const auto ref = oracle::KdvLine{nx, L, 0.01, 2.0}.step(line);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < 8; ++j) {
        err = std::max(err, std::abs(next.values()[g2.index(i, j)] - ref[i]));
        scale = std::max(scale, std::abs(ref[i]));
      }
    CHECK(err / scale <= 1e-10);
  }
}

TEST_CASE("fourth order in time") {
  const auto g = Grid2D::make(64, 64, 20.0, 20.0);
  const auto u0 = gaussian_bump(g, 1.5, 2.0);
  auto solve = [&](double dt) { return run(u0, config(2, 1, dt, 0.5)).final_state; };
  const Field ref = solve(0.0025);
  const double e1 = rel_diff(solve(0.04), ref);
  const double e2 = rel_diff(solve(0.02), ref);
  MESSAGE("errors " << e1 << " " << e2 << " ratio " << e1 / e2);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("linear-only run reproduces the group") {
  const auto g = Grid2D::make(32, 32, 12.0, 12.0);
  const auto u0 = random_field(g, 4);
  auto cfg = config(1.5, -1, 0.05, 2.0);
  cfg.linear_only = true;
  const auto r = run(u0, cfg);
  CHECK_FALSE(r.blew_up);
  CHECK(rel_diff(r.final_state, linear_propagate(u0, cfg.symbol, 2.0)) <= 1e-10);
}

TEST_CASE("soliton transport") {
  const auto g = Grid2D::make(1024, 8, 64 * kPi, kTwoPi);
  for (int kappa : {1, -1}) {
    const auto r = run(soliton(g, 1.0, 32 * kPi), config(2, kappa, 0.01, 1.0));
    CHECK_FALSE(r.blew_up);
    CHECK(rel_diff(r.final_state, soliton(g, 1.0, 32 * kPi, 1.0)) <= 1e-4);
  }
}

TEST_CASE("mass and dt bookkeeping") {
  const auto g = Grid2D::make(32, 32, 10.0, 10.0);
  auto v = oracle::random_trig(32, 32, 10.0, 10.0, 4, 9);
  for (double& x : v) x = 0.2 * x + 0.3;
  const auto u0 = Field::real(g, v);
  auto cfg = config(1.0, 1, 0.03, 0.5);
  const auto r = run(u0, cfg);
  CHECK(r.dt_used == doctest::Approx(0.5 / 17));
  CHECK(r.steps == 17);
  CHECK(r.t_reached == doctest::Approx(0.5));
  const auto& m = r.diagnostics.mass;
  for (double x : m) CHECK(std::abs(x - m.front()) <= 1e-13 * std::abs(m.front()));
  CHECK(r.diagnostics.to_csv().rfind("t,mass,l2,hamiltonian,xs,w1inf\n", 0) == 0);
}

TEST_CASE("Hamiltonian") {
  const auto g = Grid2D::make(32, 32, kTwoPi, kTwoPi);
  const KPSymbol plus(SymbolFamily::pure_power(2), 1), minus(SymbolFamily::pure_power(2), -1);
  CHECK(*hamiltonian(Field::zeros(g), plus) == 0.0);
  const auto c = Field::sample(g, [](double x, double) { return std::cos(x); });
  CHECK(*hamiltonian(c, plus) == doctest::Approx(kPi * kPi).epsilon(1e-13));
  CHECK(*hamiltonian(c, minus) == doctest::Approx(kPi * kPi).epsilon(1e-13));

  const auto u = random_field(g, 5, 4, 0.3);
  const double t = norm_l2(antideriv_x_deriv_y(u));
  CHECK(*hamiltonian(u, minus) - *hamiltonian(u, plus) == doctest::Approx(t * t).epsilon(1e-12));
  CHECK_FALSE(hamiltonian(u, KPSymbol(SymbolFamily::ilw(1), 1)).has_value());

  // closed forms: w1 has no cubic contribution, w2 no transverse one
  const auto w1 = Field::sample(g, [](double x, double y) { return std::cos(x) + 0.5 * std::sin(2 * x + y); });
  CHECK(*hamiltonian(w1, plus) == doctest::Approx(2 * kPi * kPi - kPi * kPi / 16).epsilon(1e-12));
  const auto w2 = Field::sample(g, [](double x, double) { return std::cos(x) + std::cos(2 * x); });
  CHECK(*hamiltonian(w2, plus) == doctest::Approx(5 * kPi * kPi - kPi * kPi / 2).epsilon(1e-12));
}

TEST_CASE("scaling") {
  const auto g = Grid2D::make(32, 32, 10.0, 10.0);
  const auto u = random_field(g, 6);
  CHECK(rel_diff(scaling_transform(u, 1.0, 2.0), u) == 0.0);
  for (double alpha : {1.0, 4.0 / 3.0, 2.0}) {
    for (double lambda : {0.5, 2.0}) {
      const double ratio = norm_l2(scaling_transform(u, lambda, alpha)) / norm_l2(u);
      CHECK(std::abs(ratio / std::pow(lambda, (3 * alpha - 4) / 4) - 1.0) <= 1e-12);
    }
  }
  CHECK(norm_l2(scaling_transform(u, 3.0, 4.0 / 3.0)) == doctest::Approx(norm_l2(u)).epsilon(1e-12));
  CHECK_THROWS_AS(scaling_transform(u, 0.0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(scaling_transform(u, INFINITY, 2.0), InvalidArgument);
}

TEST_CASE("scaling symmetry of the flow") {
  const auto g = Grid2D::make(64, 64, 30.0, 30.0);
  const auto u0 = gaussian_bump(g, 0.5, 3.0);
  auto cfg = config(2, 1, 0.01, 0.5);
  CHECK(verify_scaling(u0, cfg, 1.0).discrepancy == 0.0);
  auto lin = cfg;
  lin.linear_only = true;
  CHECK(verify_scaling(u0, lin, 2.0).discrepancy <= 1e-10);
  const auto rep = verify_scaling(u0, cfg, 2.0);
  CHECK_FALSE(rep.blew_up);
  CHECK(rep.discrepancy <= 1e-6);
  CHECK(rep.t_scaled == doctest::Approx(0.5 / 8));
  CHECK_THROWS_AS(verify_scaling(u0, SolverConfig{KPSymbol(SymbolFamily::ilw(1), 1)}, 2.0), InvalidArgument);
}

TEST_CASE("time reversal") {
  const auto g = Grid2D::make(64, 64, 20.0, 20.0);
  const auto u0 = project_invariant(dealias_23(gaussian_bump(g, 1.0, 2.0)));
  const KPSymbol s(SymbolFamily::pure_power(2), 1);
  const IfRk4Stepper fwd(g, s, 0.01), back(g, s, -0.01);
  const Field there = fwd.step(u0);
  CHECK(rel_diff(back.step(there), u0) <= 1e-10);
}

TEST_CASE("failures") {
  const auto g = Grid2D::make(32, 32, 10.0, 10.0);
  CHECK_THROWS_AS(run(gaussian_bump(g, 1e4, 1.0), config(2, 1, 0.01, 1.0)), InvalidArgument);
  std::vector<double> v(g.size(), 0.0);
  v[5] = std::numeric_limits<double>::quiet_NaN();
  const auto r = run(Field::real(g, v), config(2, 1, 0.01, 1.0));
  CHECK(r.blew_up);
  CHECK(r.t_reached == 0.0);
  CHECK_THROWS_AS(run(gaussian_bump(g, 1, 1), config(2, 1, 0.0, 1.0)), InvalidArgument);
  auto bad = config(2, 1, -0.1, 1.0);
  CHECK_THROWS_AS(run(gaussian_bump(g, 1, 1), bad), InvalidArgument);
}

TEST_CASE("snapshots") {
  const auto g = Grid2D::make(16, 16, 10.0, 10.0);
  auto cfg = config(2, 1, 0.01, 0.1);
  cfg.snapshot_every = 4;
  std::vector<long> steps;
  run(gaussian_bump(g, 0.5, 2.0), cfg, [&](long k, double, const Field&) { steps.push_back(k); });
  CHECK(steps == std::vector<long>{0, 4, 8, 10});
}
