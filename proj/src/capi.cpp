#include "fkp/fkp.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "fkp/constraint.hpp"
#include "fkp/error.hpp"
#include "fkp/evolution.hpp"
#include "fkp/inequalities.hpp"
#include "fkp/resonance.hpp"
#include "fkp/spectral.hpp"
#include "fkp/symbols.hpp"

#ifndef FKP_GIT_DESCRIBE
#define FKP_GIT_DESCRIBE "unknown"
#endif

struct fkp_field {
  fkp::Field f;
};

struct fkp_symbol {
  fkp::KPSymbol s;
};

struct fkp_run {
  fkp::RunResult r;
};

namespace {

thread_local std::string g_last_error;

template <class F>
fkp_status guard(F&& body) {
  try {
    body();
    return FKP_OK;
  } catch (const fkp::InvalidArgument& e) {
    g_last_error = e.what();
    return FKP_ERR_INVALID_ARGUMENT;
  } catch (const fkp::DomainError& e) {
    g_last_error = e.what();
    return FKP_ERR_DOMAIN;
  } catch (const fkp::ConstraintViolation& e) {
    g_last_error = e.what();
    return FKP_ERR_CONSTRAINT;
  } catch (const fkp::IoError& e) {
    g_last_error = e.what();
    return FKP_ERR_IO;
  } catch (const fkp::BlowUp& e) {
    g_last_error = e.what();
    return FKP_ERR_BLOWUP;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FKP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FKP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FKP_ERR_INTERNAL;
  }
}

template <class T>
void need(const T* p, const char* what) {
  if (!p) throw fkp::InvalidArgument(std::string(what) + " is NULL");
}

fkp_field* wrap(fkp::Field f) { return new fkp_field{std::move(f)}; }

fkp::SolverConfig to_cpp(const fkp_solver_config& c, const fkp::KPSymbol& s) {
  fkp::SolverConfig cfg{s};
  cfg.dt = c.dt;
  cfg.t_end = c.t_end;
  cfg.snapshot_every = c.snapshot_every;
  cfg.dealias = c.dealias != 0;
  cfg.diagnostics_every = c.diagnostics_every;
  cfg.xs_order = c.xs_order;
  cfg.linear_only = c.linear_only != 0;
  return cfg;
}

fkp::QuadratureSpec to_cpp(const fkp_quadrature_spec* q) {
  fkp::QuadratureSpec s;
  if (!q) return s;
  s.xi_min_exclusion = q->xi_min_exclusion;
  s.xi_max = q->xi_max;
  s.n_xi = q->n_xi;
  s.taper = q->taper == FKP_TAPER_GAUSSIAN ? fkp::Taper::gaussian : fkp::Taper::cosine;
  s.taper_fraction = q->taper_fraction;
  s.order = q->order;
  s.refine_tol = q->refine_tol;
  return s;
}

fkp::GaussianDatum to_cpp(const fkp_datum& d) {
  fkp::GaussianDatum g;
  g.kind = d.kind == FKP_DATUM_GAUSSIAN_DX ? fkp::DatumKind::gaussian_dx : fkp::DatumKind::gaussian;
  g.amplitude = d.amplitude;
  g.sigma = d.sigma;
  return g;
}

fkp::Variant to_cpp(fkp_variant v) { return v == FKP_FKP1 ? fkp::Variant::fkp1 : fkp::Variant::fkp2; }

fkp::Rect to_cpp(const fkp_rect& r) {
  return {r.xi_base, r.eta_base, r.xi_lo, r.xi_hi, r.eta_lo, r.eta_hi, r.amplitude};
}

fkp_rect to_c(const fkp::Rect& r) {
  return {r.xi_base, r.eta_base, r.xi_lo, r.xi_hi, r.eta_lo, r.eta_hi, r.amplitude};
}

fkp::ResonanceTestData to_cpp(const fkp_resonance_data& d) {
  fkp::ResonanceTestData r;
  r.variant = to_cpp(d.variant);
  r.alpha = d.alpha;
  r.N = d.N;
  r.theta = d.theta;
  r.gamma = d.gamma;
  r.epsilon = d.epsilon;
  r.s1 = d.s1;
  r.s2 = d.s2;
  r.rect1 = to_cpp(d.rect1);
  r.rect2 = to_cpp(d.rect2);
  r.norm1 = d.norm1;
  r.norm2 = d.norm2;
  return r;
}

fkp_picard_result to_c(const fkp::PicardResult& r) {
  return {r.N, r.t, r.norm, r.ratio, r.omega_max, r.refinement_change, r.level, r.flagged ? 1 : 0};
}

fkp_decay_value to_c(const fkp::DecayValue& v) {
  return {v.lambda, v.J.real(), v.J.imag(), v.R, v.panels, v.flagged ? 1 : 0};
}

}  // namespace

extern "C" {

const char* fkp_last_error(void) { return g_last_error.c_str(); }

const char* fkp_status_name(fkp_status s) {
  switch (s) {
    case FKP_OK: return "ok";
    case FKP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FKP_ERR_DOMAIN: return "domain error";
    case FKP_ERR_CONSTRAINT: return "constraint violation";
    case FKP_ERR_IO: return "i/o error";
    case FKP_ERR_BLOWUP: return "blow-up";
    case FKP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fkp_version(void) { return "1.0.0"; }
int fkp_manifest_schema_version(void) { return 1; }
const char* fkp_git_describe(void) { return FKP_GIT_DESCRIBE; }

fkp_status fkp_field_create_real(int nx, int ny, double lx, double ly, const double* values, fkp_field** out) {
  return guard([&] {
    need(values, "values");
    need(out, "out");
    const fkp::Grid2D g = fkp::Grid2D::make(nx, ny, lx, ly);
    *out = wrap(fkp::Field::real(g, std::vector<double>(values, values + g.size())));
  });
}

fkp_status fkp_field_soliton(int nx, int ny, double lx, double ly, double c, double x0, double t,
                             fkp_field** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(fkp::soliton(fkp::Grid2D::make(nx, ny, lx, ly), c, x0, t));
  });
}

fkp_status fkp_field_gaussian(int nx, int ny, double lx, double ly, double amplitude, double width,
                              fkp_field** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(fkp::gaussian_bump(fkp::Grid2D::make(nx, ny, lx, ly), amplitude, width));
  });
}

fkp_status fkp_field_random_band_limited(uint64_t seed, int max_mode, int n, fkp_field** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(fkp::random_band_limited(seed, max_mode, n));
  });
}

fkp_status fkp_field_load(const char* path, fkp_field** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap(fkp::load_field(path));
  });
}

fkp_status fkp_field_save(const fkp_field* u, const char* path) {
  return guard([&] {
    need(u, "field");
    need(path, "path");
    fkp::save_field(path, u->f);
  });
}

fkp_status fkp_field_clone(const fkp_field* u, fkp_field** out) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    *out = wrap(u->f);
  });
}

void fkp_field_destroy(fkp_field* u) { delete u; }

fkp_status fkp_field_shape(const fkp_field* u, int* nx, int* ny, double* lx, double* ly) {
  return guard([&] {
    need(u, "field");
    const fkp::Grid2D& g = u->f.grid();
    if (nx) *nx = g.nx();
    if (ny) *ny = g.ny();
    if (lx) *lx = g.lx();
    if (ly) *ly = g.ly();
  });
}

fkp_status fkp_field_values(const fkp_field* u, double* out, size_t n) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    const fkp::Field r = u->f.to_real();
    if (n != r.values().size()) throw fkp::InvalidArgument("output size does not match nx*ny");
    std::memcpy(out, r.values().data(), n * sizeof(double));
  });
}

fkp_status fkp_field_l2(const fkp_field* u, double* out) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    *out = fkp::norm_l2(u->f);
  });
}

fkp_status fkp_field_linf(const fkp_field* u, double* out) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    *out = fkp::norm_linf(u->f);
  });
}

fkp_status fkp_field_mass(const fkp_field* u, double* out) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    *out = fkp::mass(u->f);
  });
}

fkp_status fkp_field_norm_xs(const fkp_field* u, double s, double* out) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    *out = fkp::norm_xs(u->f, s);
  });
}

fkp_status fkp_field_norm_hs1s2(const fkp_field* u, double s1, double s2, double* out) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    *out = fkp::norm_hs1s2(u->f, s1, s2);
  });
}

fkp_status fkp_field_deriv_x(const fkp_field* u, fkp_field** out) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    *out = wrap(fkp::deriv_x(u->f).to_real());
  });
}

fkp_status fkp_field_rel_diff(const fkp_field* a, const fkp_field* b, double* out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    const fkp::Field ra = a->f.to_real(), rb = b->f.to_real();
    if (!(ra.grid() == rb.grid())) throw fkp::InvalidArgument("fields live on different grids");
    std::vector<double> d(ra.values().begin(), ra.values().end());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] -= rb.values()[k];
    const double den = fkp::norm_l2(rb);
    const double num = fkp::norm_l2(fkp::Field::real(ra.grid(), std::move(d)));
    *out = den > 0.0 ? num / den : num;
  });
}

fkp_status fkp_symbol_create(const char* family, double param, int kappa, fkp_symbol** out) {
  return guard([&] {
    need(family, "family");
    need(out, "out");
    const std::string f = family;
    if (f == "power") {
      *out = new fkp_symbol{fkp::KPSymbol(fkp::SymbolFamily::pure_power(param), kappa)};
    } else if (f == "ilw") {
      *out = new fkp_symbol{fkp::KPSymbol(fkp::SymbolFamily::ilw(param), kappa)};
    } else if (f == "whitham") {
      *out = new fkp_symbol{fkp::KPSymbol(fkp::SymbolFamily::whitham_st(param), kappa)};
    } else {
      throw fkp::InvalidArgument("unknown symbol family '" + f + "' (expected power, ilw or whitham)");
    }
  });
}

fkp_status fkp_symbol_from_table(const char* csv_path, double alpha, int kappa, fkp_symbol** out) {
  return guard([&] {
    need(csv_path, "csv_path");
    need(out, "out");
    *out = new fkp_symbol{fkp::KPSymbol(fkp::SymbolFamily::table_from_csv(csv_path, alpha), kappa)};
  });
}

void fkp_symbol_destroy(fkp_symbol* s) { delete s; }

fkp_status fkp_symbol_alpha(const fkp_symbol* s, double* out) {
  return guard([&] {
    need(s, "symbol");
    need(out, "out");
    *out = s->s.family().alpha();
  });
}

fkp_status fkp_symbol_w(const fkp_symbol* s, double xi, int order, double* out) {
  return guard([&] {
    need(s, "symbol");
    need(out, "out");
    *out = s->s.family().dw(xi, order);
  });
}

fkp_status fkp_symbol_omega(const fkp_symbol* s, double xi, double eta, double* out) {
  return guard([&] {
    need(s, "symbol");
    need(out, "out");
    *out = s->s.omega(xi, eta);
  });
}

fkp_status fkp_validate_symbol(const fkp_symbol* s, double alpha, double xi0, double band_lo, double band_hi,
                               fkp_hypothesis_report* out) {
  return guard([&] {
    need(s, "symbol");
    need(out, "out");
    const auto r = fkp::validate_hypotheses(s->s.family(), alpha, xi0, {band_lo, band_hi});
    out->xi0 = r.xi0;
    out->alpha = r.alpha;
    out->band_lo = r.band.lo;
    out->band_hi = r.band.hi;
    out->max_abs_w_low = r.max_abs_w_low;
    for (int k = 0; k < 3; ++k) {
      out->ratio_min[k] = r.ratio_min[k];
      out->ratio_max[k] = r.ratio_max[k];
    }
    out->pass = r.pass ? 1 : 0;
  });
}

void fkp_solver_config_default(fkp_solver_config* cfg) {
  if (!cfg) return;
  const fkp::SolverConfig d{fkp::KPSymbol(fkp::SymbolFamily::pure_power(2.0), 1)};
  cfg->dt = d.dt;
  cfg->t_end = d.t_end;
  cfg->snapshot_every = d.snapshot_every;
  cfg->dealias = d.dealias ? 1 : 0;
  cfg->diagnostics_every = d.diagnostics_every;
  cfg->xs_order = d.xs_order;
  cfg->linear_only = d.linear_only ? 1 : 0;
}

fkp_status fkp_run_create(const fkp_field* u0, const fkp_symbol* s, const fkp_solver_config* cfg,
                          fkp_snapshot_fn sink, void* user, fkp_run** out) {
  return guard([&] {
    need(u0, "u0");
    need(s, "symbol");
    need(cfg, "config");
    need(out, "out");
    fkp::SnapshotSink cb;
    if (sink) {
      cb = [sink, user](long step, double t, const fkp::Field& u) {
        const fkp_field view{u};
        sink(step, t, &view, user);
      };
    }
    *out = new fkp_run{fkp::run(u0->f, to_cpp(*cfg, s->s), cb)};
  });
}

void fkp_run_destroy(fkp_run* r) { delete r; }

fkp_status fkp_run_summary_get(const fkp_run* r, fkp_run_summary* out) {
  return guard([&] {
    need(r, "run");
    need(out, "out");
    out->blew_up = r->r.blew_up ? 1 : 0;
    out->t_reached = r->r.t_reached;
    out->dt_used = r->r.dt_used;
    out->steps = r->r.steps;
    out->advisory_dt = r->r.advisory_dt;
    out->discarded_energy = r->r.discarded_energy;
  });
}

const char* fkp_run_message(const fkp_run* r) { return r ? r->r.message.c_str() : ""; }

size_t fkp_run_diagnostics_count(const fkp_run* r) { return r ? r->r.diagnostics.size() : 0; }

fkp_status fkp_run_diagnostics_row(const fkp_run* r, size_t index, double row[6]) {
  return guard([&] {
    need(r, "run");
    need(row, "row");
    const auto& d = r->r.diagnostics;
    if (index >= d.size()) throw fkp::InvalidArgument("diagnostics index out of range");
    row[0] = d.times[index];
    row[1] = d.mass[index];
    row[2] = d.l2[index];
    row[3] = d.hamiltonian[index];
    row[4] = d.xs_norm[index];
    row[5] = d.w1inf[index];
  });
}

fkp_status fkp_run_write_diagnostics(const fkp_run* r, const char* path) {
  return guard([&] {
    need(r, "run");
    need(path, "path");
    r->r.diagnostics.write_csv(path);
  });
}

fkp_status fkp_run_final_state(const fkp_run* r, fkp_field** out) {
  return guard([&] {
    need(r, "run");
    need(out, "out");
    *out = wrap(r->r.final_state);
  });
}

fkp_status fkp_linear_propagate(const fkp_field* u0, const fkp_symbol* s, double t, fkp_field** out) {
  return guard([&] {
    need(u0, "u0");
    need(s, "symbol");
    need(out, "out");
    *out = wrap(fkp::linear_propagate(u0->f, s->s, t));
  });
}

fkp_status fkp_step(const fkp_field* u, const fkp_symbol* s, const fkp_solver_config* cfg, fkp_field** out) {
  return guard([&] {
    need(u, "field");
    need(s, "symbol");
    need(cfg, "config");
    need(out, "out");
    *out = wrap(fkp::step_ifrk4(u->f, to_cpp(*cfg, s->s)));
  });
}

fkp_status fkp_hamiltonian(const fkp_field* u, const fkp_symbol* s, double* out, int* defined) {
  return guard([&] {
    need(u, "field");
    need(s, "symbol");
    need(out, "out");
    const auto h = fkp::hamiltonian(u->f, s->s);
    *out = h.value_or(NAN);
    if (defined) *defined = h.has_value() ? 1 : 0;
  });
}

fkp_status fkp_scaling_transform(const fkp_field* u, double lambda, double alpha, fkp_field** out) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    *out = wrap(fkp::scaling_transform(u->f, lambda, alpha));
  });
}

fkp_status fkp_verify_scaling(const fkp_field* u0, const fkp_symbol* s, const fkp_solver_config* cfg,
                              double lambda, fkp_scaling_report* out) {
  return guard([&] {
    need(u0, "u0");
    need(s, "symbol");
    need(cfg, "config");
    need(out, "out");
    const auto r = fkp::verify_scaling(u0->f, to_cpp(*cfg, s->s), lambda);
    *out = {r.lambda, r.t, r.t_scaled, r.discrepancy, r.blew_up ? 1 : 0};
  });
}

fkp_status fkp_dt_criterion_eval(const fkp_field* u0, fkp_dt_criterion* out) {
  return guard([&] {
    need(u0, "u0");
    need(out, "out");
    const auto r = fkp::dt_criterion(u0->f);
    *out = {r.value, r.zero_column_energy, r.flag ? 1 : 0};
  });
}

void fkp_quadrature_spec_default(fkp_quadrature_spec* q) {
  if (!q) return;
  const fkp::QuadratureSpec d;
  q->xi_min_exclusion = d.xi_min_exclusion;
  q->xi_max = d.xi_max;
  q->n_xi = d.n_xi;
  q->taper = d.taper == fkp::Taper::gaussian ? FKP_TAPER_GAUSSIAN : FKP_TAPER_COSINE;
  q->taper_fraction = d.taper_fraction;
  q->order = d.order;
  q->refine_tol = d.refine_tol;
}

fkp_status fkp_datum_value(const fkp_datum* d, double x, double y, double* out) {
  return guard([&] {
    need(d, "datum");
    need(out, "out");
    *out = to_cpp(*d).value(x, y);
  });
}

fkp_status fkp_datum_x_mass(const fkp_datum* d, double y, double* out) {
  return guard([&] {
    need(d, "datum");
    need(out, "out");
    *out = to_cpp(*d).x_mass(y);
  });
}

fkp_status fkp_free_solution_at(const fkp_datum* d, const fkp_symbol* s, const double* x, const double* y,
                                size_t n, double t, const fkp_quadrature_spec* q, double* re, double* im,
                                double* change, int* flagged) {
  return guard([&] {
    need(d, "datum");
    need(s, "symbol");
    need(x, "x");
    need(y, "y");
    need(re, "re");
    need(im, "im");
    std::vector<std::pair<double, double>> pts(n);
    for (size_t k = 0; k < n; ++k) pts[k] = {x[k], y[k]};
    const auto r = fkp::free_solution_at(to_cpp(*d), s->s, pts, t, to_cpp(q));
    for (size_t k = 0; k < n; ++k) {
      re[k] = r.values[k].real();
      im[k] = r.values[k].imag();
      if (change) change[k] = r.refinement_change[k];
    }
    if (flagged) *flagged = r.flagged ? 1 : 0;
  });
}

fkp_status fkp_generalized_x_mass(const fkp_datum* d, const fkp_symbol* s, double y, double t, const double* X,
                                  size_t n, const fkp_quadrature_spec* q, fkp_mass_row* rows, int* flagged) {
  return guard([&] {
    need(d, "datum");
    need(s, "symbol");
    need(X, "X");
    need(rows, "rows");
    const auto tab = fkp::generalized_x_mass(to_cpp(*d), s->s, y, t, std::vector<double>(X, X + n), to_cpp(q));
    for (size_t k = 0; k < n; ++k) {
      const auto& r = tab.rows[k];
      rows[k] = {r.X,
                 r.mass.real(),
                 r.mass.imag(),
                 r.mass_fourier.real(),
                 r.mass_fourier.imag(),
                 r.refinement_change,
                 r.flagged ? 1 : 0};
    }
    if (flagged) *flagged = tab.flagged ? 1 : 0;
  });
}

fkp_status fkp_gamma1(double alpha, double xi1, double xi2, double* out) {
  return guard([&] {
    need(out, "out");
    *out = fkp::gamma1(alpha, xi1, xi2);
  });
}

fkp_status fkp_gamma2(double xi1, double xi2, double eta1, double eta2, double* out) {
  return guard([&] {
    need(out, "out");
    *out = fkp::gamma2(xi1, xi2, eta1, eta2);
  });
}

fkp_status fkp_omega_res(fkp_variant v, double alpha, double xi1, double xi2, double eta1, double eta2,
                         double* out) {
  return guard([&] {
    need(out, "out");
    *out = fkp::omega_res(to_cpp(v), alpha, xi1, xi2, eta1, eta2);
  });
}

fkp_status fkp_build_test_data(fkp_variant v, double alpha, double N, double theta, double s1, double s2,
                               fkp_resonance_data* out) {
  return guard([&] {
    need(out, "out");
    const auto d = fkp::build_test_data(to_cpp(v), alpha, N, theta, s1, s2);
    *out = {v, d.alpha, d.N, d.theta, d.gamma, d.epsilon, d.s1, d.s2, to_c(d.rect1), to_c(d.rect2), d.norm1,
            d.norm2};
  });
}

fkp_status fkp_resonance_bounds_check(const fkp_resonance_data* d, long n_samples, uint64_t seed,
                                      fkp_bounds_report* out) {
  return guard([&] {
    need(d, "data");
    need(out, "out");
    const auto r = fkp::resonance_bounds_check(to_cpp(*d), n_samples, seed);
    *out = {r.n_samples,           r.seed,
            r.gamma1_ratio_min,    r.gamma1_ratio_max,
            r.gamma2_ratio_min,    r.gamma2_ratio_max,
            r.gamma1_remainder_max, r.gamma2_remainder_max,
            r.omega_max};
  });
}

void fkp_picard_options_default(fkp_picard_options* o) {
  if (!o) return;
  const fkp::PicardOptions d;
  o->order = d.order;
  o->rel_tol = d.rel_tol;
  o->max_level = d.max_level;
  o->use_window = 0;
  o->window = {};
}

fkp_status fkp_picard_second_norm(const fkp_resonance_data* d, double t, const fkp_picard_options* o,
                                  fkp_picard_result* out) {
  return guard([&] {
    need(d, "data");
    need(out, "out");
    fkp::PicardOptions opt;
    if (o) {
      opt.order = o->order;
      opt.rel_tol = o->rel_tol;
      opt.max_level = o->max_level;
      if (o->use_window) opt.window = to_cpp(o->window);
    }
    *out = to_c(fkp::picard_second_norm(to_cpp(*d), t, opt));
  });
}

fkp_status fkp_growth_exponent_fit(const fkp_picard_result* results, size_t n, fkp_exponent_fit* out) {
  return guard([&] {
    need(results, "results");
    need(out, "out");
    std::vector<fkp::PicardResult> rs(n);
    for (size_t k = 0; k < n; ++k) {
      rs[k].N = results[k].N;
      rs[k].ratio = results[k].ratio;
    }
    const auto f = fkp::growth_exponent_fit(rs);
    *out = {f.exponent, f.intercept, f.r2};
  });
}

double fkp_predicted_exponent(fkp_variant v, double alpha) { return fkp::predicted_exponent(to_cpp(v), alpha); }

fkp_status fkp_critical_exponents(double alpha, fkp_critical* out) {
  return guard([&] {
    need(out, "out");
    const auto c = fkp::critical_exponents(alpha);
    *out = {c.s_alpha, c.l2_critical, c.energy_critical, c.l2_scaling_exponent};
  });
}

fkp_status fkp_gn_ratio(const fkp_field* f, double alpha, fkp_gn* out) {
  return guard([&] {
    need(f, "field");
    need(out, "out");
    const auto r = fkp::gn_ratio(f->f, alpha);
    *out = {r.ratio, r.lhs, r.rhs, r.discarded, r.in_lemma_range ? 1 : 0};
  });
}

fkp_status fkp_gn_dilation_scan(const fkp_field* f, double alpha, int min_pow, int max_pow, fkp_gn_row* rows,
                                double* max_ratio) {
  return guard([&] {
    need(f, "field");
    need(rows, "rows");
    const auto s = fkp::gn_dilation_scan(f->f, alpha, min_pow, max_pow);
    for (std::size_t k = 0; k < s.rows.size(); ++k) rows[k] = {s.rows[k].a, s.rows[k].b, s.rows[k].ratio};
    if (max_ratio) *max_ratio = s.max_ratio;
  });
}

fkp_status fkp_decay_J(double lambda, double alpha, double R, int conjugate, fkp_decay_value* out) {
  return guard([&] {
    need(out, "out");
    fkp::DecayOptions opt;
    opt.conjugate = conjugate != 0;
    *out = to_c(fkp::decay_J(lambda, alpha, R, opt));
  });
}

fkp_status fkp_decay_scan(double alpha, const double* lambdas, size_t n, double R, fkp_decay_value* at_R,
                          fkp_decay_value* at_2R, fkp_decay_summary* out) {
  return guard([&] {
    need(lambdas, "lambdas");
    need(out, "out");
    const auto s = fkp::decay_scan(alpha, std::vector<double>(lambdas, lambdas + n), R);
    for (size_t k = 0; k < n; ++k) {
      if (at_R) at_R[k] = to_c(s.rows[k].at_R);
      if (at_2R) at_2R[k] = to_c(s.rows[k].at_2R);
    }
    *out = {s.sup_abs,           s.sup_lambda, s.max_rel_change, s.stable ? 1 : 0, s.edge_growth ? 1 : 0,
            s.flagged ? 1 : 0};
  });
}

fkp_status fkp_embedding_ratio(const fkp_field* u, double s, double* out) {
  return guard([&] {
    need(u, "field");
    need(out, "out");
    *out = fkp::embedding_ratio(u->f, s);
  });
}

fkp_status fkp_embedding_ensemble(double s, int draws, uint64_t seed, int max_mode, double* ratios,
                                  double* max_ratio) {
  return guard([&] {
    const auto e = fkp::embedding_ensemble(s, draws, seed, max_mode);
    if (ratios) std::copy(e.ratios.begin(), e.ratios.end(), ratios);
    if (max_ratio) *max_ratio = e.max_ratio;
  });
}

}  // extern "C"
