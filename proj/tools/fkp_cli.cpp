// fkp: command line front end over the C API.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fkp/fkp.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitNonConverged = 3;

// Thrown on a failing library call; carries the exit code to use.
struct Failure {
  int code;
  std::string message;
};

void check(fkp_status s, const char* what) {
  if (s == FKP_OK) return;
  const int code = (s == FKP_ERR_BLOWUP) ? kExitNonConverged
                   : (s == FKP_ERR_INTERNAL || s == FKP_ERR_IO) ? 1
                                                                : kExitPrecondition;
  throw Failure{code, std::string(what) + ": " + fkp_status_name(s) + ": " + fkp_last_error()};
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using FieldPtr = std::unique_ptr<fkp_field, Deleter<fkp_field, fkp_field_destroy>>;
using SymbolPtr = std::unique_ptr<fkp_symbol, Deleter<fkp_symbol, fkp_symbol_destroy>>;
using RunPtr = std::unique_ptr<fkp_run, Deleter<fkp_run, fkp_run_destroy>>;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sha256_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw Failure{1, "cannot read " + p.string() + " for hashing"};
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (is) {
    is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  char h[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(h, sizeof h, "%02x", md[k]);
    hex += h;
  }
  return hex;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.5g", v);
  return buf;
}

// Collects output files and writes manifest.json atomically at the end.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv) : command_(std::move(command)), argv_(std::move(argv)) {
    started_ = utc_now();
  }

  void set_out_dir(const fs::path& d) { out_ = d; }
  const fs::path& out_dir() const { return out_; }
  void set_config(std::string c) { config_ = std::move(c); }
  void set_seed(std::uint64_t s) { seed_ = s; }
  json& summary() { return summary_; }

  fs::path output(const std::string& name) {
    fs::create_directories((out_ / name).parent_path());
    files_.push_back(name);
    return out_ / name;
  }

  void write_text(const std::string& name, const std::string& text) {
    const fs::path p = output(name);
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    os << text;
    if (!os) throw Failure{1, "cannot write " + p.string()};
  }

  void finish(int exit_code) const {
    json m;
    m["schema_version"] = fkp_manifest_schema_version();
    m["command"] = command_;
    m["argv"] = argv_;
    m["config_path"] = config_;
    m["seed"] = seed_;
    m["git_describe"] = fkp_git_describe();
    m["library_version"] = fkp_version();
    m["started"] = started_;
    m["finished"] = utc_now();
    m["exit_code"] = exit_code;
    json outs = json::array();
    for (const auto& f : files_) {
      const fs::path p = out_ / f;
      if (!fs::exists(p)) continue;
      outs.push_back({{"path", f}, {"bytes", fs::file_size(p)}, {"sha256", sha256_file(p)}});
    }
    m["outputs"] = outs;
    m["summary"] = summary_;
    fs::create_directories(out_);
    const fs::path tmp = out_ / "manifest.json.tmp";
    {
      std::ofstream os(tmp, std::ios::trunc);
      os << m.dump(2) << "\n";
      if (!os) throw Failure{1, "cannot write manifest"};
    }
    fs::rename(tmp, out_ / "manifest.json");
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  fs::path out_ = "fkp-run";
  std::string config_;
  std::uint64_t seed_ = 1;
  std::string started_;
  std::vector<std::string> files_;
  json summary_ = json::object();
};

// Config files are flat "key = value" lines; keys are attached to whichever
// subcommand was selected on the command line.
class FlatConfig : public CLI::ConfigINI {
 public:
  explicit FlatConfig(const CLI::App* root) : root_(root) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    std::vector<std::string> path;
    for (const CLI::App* a = root_;;) {
      const auto subs = a->get_subcommands();
      if (subs.empty()) break;
      a = subs.front();
      path.push_back(a->get_name());
    }
    for (auto& it : items) {
      if (it.parents.empty()) it.parents = path;
    }
    return items;
  }

 private:
  const CLI::App* root_;
};

SymbolPtr make_symbol(const std::string& family, double alpha, double delta, double b, int kappa,
                      const std::string& table) {
  fkp_symbol* s = nullptr;
  if (family == "table") {
    check(fkp_symbol_from_table(table.c_str(), alpha, kappa, &s), "symbol table");
  } else {
    const double param = family == "ilw" ? delta : family == "whitham" ? b : alpha;
    check(fkp_symbol_create(family.c_str(), param, kappa, &s), "symbol");
  }
  return SymbolPtr(s);
}

// ---- evolve ----------------------------------------------------------------

struct EvolveArgs {
  std::string symbol = "power";
  double alpha = 2.0, delta = 1.0, b = 1.0;
  int kappa = 1;
  std::string table;
  std::string init = "gaussian";
  double amplitude = 1.0, width = 1.0, speed = 1.0;
  int nx = 64, ny = 64;
  double lx = 20.0, ly = 20.0;
  double dt = 1e-3, t_end = 1.0;
  int snapshot_every = 0, diagnostics_every = 1;
  bool no_dealias = false, linear_only = false;
  double xs_order = 1.0;
};

struct SnapshotCtx {
  Manifest* manifest;
  std::string error;
};

void save_snapshot(long step, double, const fkp_field* u, void* user) {
  auto* ctx = static_cast<SnapshotCtx*>(user);
  char name[64];
  std::snprintf(name, sizeof name, "snapshots/step_%08ld.fkpf", step);
  const fs::path p = ctx->manifest->output(name);
  if (fkp_field_save(u, p.string().c_str()) != FKP_OK && ctx->error.empty()) ctx->error = fkp_last_error();
}

int run_evolve(const EvolveArgs& a, Manifest& m) {
  const SymbolPtr sym = make_symbol(a.symbol, a.alpha, a.delta, a.b, a.kappa, a.table);
  fkp_field* raw = nullptr;
  if (a.init == "gaussian") {
    check(fkp_field_gaussian(a.nx, a.ny, a.lx, a.ly, a.amplitude, a.width, &raw), "initial data");
  } else if (a.init == "soliton") {
    check(fkp_field_soliton(a.nx, a.ny, a.lx, a.ly, a.speed, 0.5 * a.lx, 0.0, &raw), "initial data");
  } else if (a.init.rfind("file:", 0) == 0) {
    check(fkp_field_load(a.init.substr(5).c_str(), &raw), "initial data");
  } else {
    throw Failure{kExitPrecondition, "unknown --init '" + a.init + "'"};
  }
  const FieldPtr u0(raw);

  fkp_solver_config cfg;
  fkp_solver_config_default(&cfg);
  cfg.dt = a.dt;
  cfg.t_end = a.t_end;
  cfg.snapshot_every = a.snapshot_every;
  cfg.diagnostics_every = a.diagnostics_every;
  cfg.dealias = a.no_dealias ? 0 : 1;
  cfg.xs_order = a.xs_order;
  cfg.linear_only = a.linear_only ? 1 : 0;

  SnapshotCtx ctx{&m, {}};
  fkp_run* rraw = nullptr;
  check(fkp_run_create(u0.get(), sym.get(), &cfg, a.snapshot_every > 0 ? save_snapshot : nullptr, &ctx, &rraw),
        "evolve");
  const RunPtr run(rraw);
  if (!ctx.error.empty()) throw Failure{1, "snapshot: " + ctx.error};

  check(fkp_run_write_diagnostics(run.get(), m.output("diagnostics.csv").string().c_str()), "diagnostics");
  fkp_field* fraw = nullptr;
  check(fkp_run_final_state(run.get(), &fraw), "final state");
  const FieldPtr final_state(fraw);
  check(fkp_field_save(final_state.get(), m.output("final.fkpf").string().c_str()), "final state");

  fkp_run_summary s;
  check(fkp_run_summary_get(run.get(), &s), "summary");
  const std::size_t n = fkp_run_diagnostics_count(run.get());
  double first[6], last[6];
  check(fkp_run_diagnostics_row(run.get(), 0, first), "diagnostics");
  check(fkp_run_diagnostics_row(run.get(), n - 1, last), "diagnostics");
  const double l2_drift = std::abs(last[2] - first[2]) / first[2];
  const double h_drift = std::isnan(first[3]) ? NAN : std::abs(last[3] - first[3]) / std::abs(first[3]);

  auto& j = m.summary();
  j["steps"] = s.steps;
  j["dt_used"] = s.dt_used;
  j["advisory_dt"] = s.advisory_dt;
  j["t_reached"] = s.t_reached;
  j["blew_up"] = s.blew_up != 0;
  j["l2_rel_drift"] = l2_drift;
  j["hamiltonian_rel_drift"] = std::isnan(h_drift) ? json(nullptr) : json(h_drift);
  j["discarded_energy"] = s.discarded_energy;
  if (s.blew_up) j["message"] = fkp_run_message(run.get());

  std::cout << "steps=" << s.steps << " dt_used=" << fmt(s.dt_used) << " t_reached=" << fmt(s.t_reached)
            << " l2_rel_drift=" << short_fmt(l2_drift);
  if (!std::isnan(h_drift)) std::cout << " hamiltonian_rel_drift=" << short_fmt(h_drift);
  std::cout << " blew_up=" << s.blew_up << "\n";
  if (cfg.dt > s.advisory_dt) {
    std::cerr << "note: dt=" << fmt(cfg.dt) << " exceeds the advisory bound " << fmt(s.advisory_dt) << "\n";
  }
  if (s.blew_up) {
    std::cerr << "blow-up: " << fkp_run_message(run.get()) << "\n";
    return kExitNonConverged;
  }
  // The linear group is unitary; anything beyond round-off means a broken run.
  if (a.linear_only && l2_drift > 1e-10) return kExitNonConverged;
  return kExitOk;
}

// ---- resonance-scan ---------------------------------------------------------

struct ResonanceArgs {
  std::string variant = "fkp2";
  double alpha = 1.0, theta = 0.01, s1 = 0.0, s2 = 0.0, t = 1.0;
  std::vector<double> N_list{100.0, 1000.0, 10000.0};
  long samples = 10000;
  int order = 8;
};

int run_resonance(const ResonanceArgs& a, Manifest& m, std::uint64_t seed) {
  fkp_variant v;
  if (a.variant == "fkp2") {
    v = FKP_FKP2;
  } else if (a.variant == "fkp1") {
    v = FKP_FKP1;
  } else {
    throw Failure{kExitPrecondition, "unknown --variant '" + a.variant + "'"};
  }
  if (a.N_list.size() < 3) throw Failure{kExitPrecondition, "--N-list needs at least 3 values"};

  fkp_picard_options opt;
  fkp_picard_options_default(&opt);
  opt.order = a.order;
  std::vector<fkp_picard_result> results;
  std::string csv = "N,ratio,omega_max,exponent_running\n";
  bool flagged = false;
  json rows = json::array();
  for (double N : a.N_list) {
    fkp_resonance_data d;
    check(fkp_build_test_data(v, a.alpha, N, a.theta, a.s1, a.s2, &d), "test data");
    fkp_picard_result r;
    check(fkp_picard_second_norm(&d, a.t, &opt, &r), "picard");
    results.push_back(r);
    flagged = flagged || r.flagged;
    double running = NAN;
    if (results.size() == 2) {
      running = std::log(results[1].ratio / results[0].ratio) / std::log(results[1].N / results[0].N);
    } else if (results.size() >= 3) {
      fkp_exponent_fit f;
      check(fkp_growth_exponent_fit(results.data(), results.size(), &f), "fit");
      running = f.exponent;
    }
    csv += fmt(N) + "," + fmt(r.ratio) + "," + fmt(r.omega_max) + "," + fmt(running) + "\n";
    rows.push_back({{"N", N}, {"ratio", r.ratio}, {"norm", r.norm}, {"omega_max", r.omega_max},
                    {"norm1", d.norm1}, {"norm2", d.norm2}, {"flagged", r.flagged != 0}});
  }
  m.write_text("resonance.csv", csv);

  fkp_exponent_fit f;
  check(fkp_growth_exponent_fit(results.data(), results.size(), &f), "fit");
  const double predicted = fkp_predicted_exponent(v, a.alpha);

  fkp_resonance_data top;
  check(fkp_build_test_data(v, a.alpha, a.N_list.back(), a.theta, a.s1, a.s2, &top), "test data");
  fkp_bounds_report b;
  check(fkp_resonance_bounds_check(&top, a.samples, seed, &b), "bounds");

  auto& j = m.summary();
  j["rows"] = rows;
  j["exponent"] = f.exponent;
  j["r2"] = f.r2;
  j["predicted"] = predicted;
  j["bounds"] = {{"N", top.N},
                 {"samples", b.n_samples},
                 {"gamma1_ratio", {b.gamma1_ratio_min, b.gamma1_ratio_max}},
                 {"gamma2_ratio", {b.gamma2_ratio_min, b.gamma2_ratio_max}},
                 {"gamma1_remainder_max", b.gamma1_remainder_max},
                 {"gamma2_remainder_max", b.gamma2_remainder_max},
                 {"omega_max", b.omega_max}};

  std::cout << "bounds N=" << fmt(top.N) << " gamma1_ratio=[" << short_fmt(b.gamma1_ratio_min) << ","
            << short_fmt(b.gamma1_ratio_max) << "] gamma2_ratio=[" << short_fmt(b.gamma2_ratio_min) << ","
            << short_fmt(b.gamma2_ratio_max) << "] omega_max=" << short_fmt(b.omega_max) << "\n";
  std::cout << "exponent=" << short_fmt(f.exponent) << " r2=" << short_fmt(f.r2)
            << " predicted=" << short_fmt(predicted) << "\n";
  return flagged ? kExitNonConverged : kExitOk;
}

// ---- constraint-demo --------------------------------------------------------

struct ConstraintArgs {
  double alpha = 2.0;
  int kappa = 1;
  std::string datum = "gaussian";
  double sigma = 2.0, amplitude = 1.0;
  double t = 0.1, y = 0.0;
  double X_max = 100.0;
  int X_steps = 20;
  double exclusion = 1e-5, xi_max = 0.0, refine_tol = 1e-3;
  int n_xi = 2048;
  std::string taper = "cosine";
};

std::string mass_csv(const std::vector<fkp_mass_row>& rows) {
  std::string csv = "X,mass_real,mass_imag_residual,flag\n";
  for (const auto& r : rows) csv += fmt(r.X) + "," + fmt(r.mass_re) + "," + fmt(r.mass_im) + "," + std::to_string(r.flagged) + "\n";
  return csv;
}

int run_constraint(const ConstraintArgs& a, Manifest& m) {
  if (a.X_steps < 1) throw Failure{kExitPrecondition, "--X-steps must be positive"};
  if (a.taper != "cosine" && a.taper != "gaussian") throw Failure{kExitPrecondition, "--taper must be cosine or gaussian"};
  const SymbolPtr sym = make_symbol("power", a.alpha, 0, 0, a.kappa, "");
  fkp_datum d{a.datum == "gaussian_dx" ? FKP_DATUM_GAUSSIAN_DX : FKP_DATUM_GAUSSIAN, a.amplitude, a.sigma};
  if (a.datum != "gaussian" && a.datum != "gaussian_dx") throw Failure{kExitPrecondition, "--datum must be gaussian or gaussian_dx"};
  fkp_quadrature_spec q;
  fkp_quadrature_spec_default(&q);
  q.xi_min_exclusion = a.exclusion;
  q.xi_max = a.xi_max;
  q.n_xi = a.n_xi;
  q.refine_tol = a.refine_tol;
  q.taper = a.taper == "gaussian" ? FKP_TAPER_GAUSSIAN : FKP_TAPER_COSINE;

  std::vector<double> X;
  for (int k = 1; k <= a.X_steps; ++k) X.push_back(a.X_max * k / a.X_steps);
  std::vector<fkp_mass_row> at_t(X.size()), at_0(X.size());
  int flag_t = 0, flag_0 = 0;
  check(fkp_generalized_x_mass(&d, sym.get(), a.y, a.t, X.data(), X.size(), &q, at_t.data(), &flag_t), "mass");
  check(fkp_generalized_x_mass(&d, sym.get(), a.y, 0.0, X.data(), X.size(), &q, at_0.data(), &flag_0), "mass");
  m.write_text("mass.csv", mass_csv(at_t));
  m.write_text("mass_t0.csv", mass_csv(at_0));

  double exact = 0.0;
  check(fkp_datum_x_mass(&d, a.y, &exact), "datum");
  const double mt = std::hypot(at_t.back().mass_re, at_t.back().mass_im);
  const double m0 = std::hypot(at_0.back().mass_re, at_0.back().mass_im);
  const double ratio = m0 > 0.0 ? mt / m0 : NAN;
  auto& j = m.summary();
  j["M_t"] = at_t.back().mass_re;
  j["M_0"] = at_0.back().mass_re;
  j["exact_total_mass"] = exact;
  j["ratio"] = ratio;
  j["flagged"] = (flag_t | flag_0) != 0;
  std::cout << "X_max=" << fmt(X.back()) << " M_t=" << short_fmt(at_t.back().mass_re)
            << " M_0=" << short_fmt(at_0.back().mass_re) << " exact_total=" << short_fmt(exact)
            << " ratio=" << short_fmt(ratio) << " flagged=" << (flag_t | flag_0) << "\n";
  return (flag_t | flag_0) ? kExitNonConverged : kExitOk;
}

// ---- ineq -------------------------------------------------------------------

struct GnArgs {
  double alpha = 0.9;
  int nx = 128, ny = 128;
  double lx = 40.0, ly = 40.0, width = 1.0;
  std::string shape = "gaussian_dx";
  int min_pow = -3, max_pow = 3;
};

int run_gn(const GnArgs& a, Manifest& m) {
  fkp_field* raw = nullptr;
  check(fkp_field_gaussian(a.nx, a.ny, a.lx, a.ly, 1.0, a.width, &raw), "field");
  FieldPtr f(raw);
  if (a.shape == "gaussian_dx") {
    check(fkp_field_deriv_x(f.get(), &raw), "field");
    f.reset(raw);
  } else if (a.shape != "gaussian") {
    throw Failure{kExitPrecondition, "--shape must be gaussian or gaussian_dx"};
  }
  fkp_gn base;
  check(fkp_gn_ratio(f.get(), a.alpha, &base), "gn");
  if (!base.in_lemma_range) std::cerr << "warning: alpha=" << fmt(a.alpha) << " is outside [0.8, 1)\n";
  const int side = a.max_pow - a.min_pow + 1;
  if (side < 1) throw Failure{kExitPrecondition, "--min-pow must not exceed --max-pow"};
  std::vector<fkp_gn_row> rows(static_cast<std::size_t>(side) * side);
  double max_ratio = 0.0;
  check(fkp_gn_dilation_scan(f.get(), a.alpha, a.min_pow, a.max_pow, rows.data(), &max_ratio), "gn scan");
  std::string csv = "a,b,ratio\n";
  for (const auto& r : rows) csv += fmt(r.a) + "," + fmt(r.b) + "," + fmt(r.ratio) + "\n";
  m.write_text("gn.csv", csv);
  m.summary() = {{"ratio", base.ratio}, {"max_ratio", max_ratio}, {"in_lemma_range", base.in_lemma_range != 0},
                 {"discarded", base.discarded}};
  std::cout << "ratio=" << short_fmt(base.ratio) << " max_ratio=" << short_fmt(max_ratio)
            << " in_lemma_range=" << base.in_lemma_range << "\n";
  return kExitOk;
}

struct DecayArgs {
  double alpha = 2.0, R = 40.0;
  double lambda_min = -50.0, lambda_max = 50.0;
  int lambda_steps = 101;
};

int run_decay(const DecayArgs& a, Manifest& m) {
  if (a.lambda_steps < 2) throw Failure{kExitPrecondition, "--lambda-steps must be at least 2"};
  std::vector<double> lambdas;
  for (int k = 0; k < a.lambda_steps; ++k)
    lambdas.push_back(a.lambda_min + (a.lambda_max - a.lambda_min) * k / (a.lambda_steps - 1));
  std::vector<fkp_decay_value> at_R(lambdas.size()), at_2R(lambdas.size());
  fkp_decay_summary s;
  check(fkp_decay_scan(a.alpha, lambdas.data(), lambdas.size(), a.R, at_R.data(), at_2R.data(), &s), "decay");
  std::string csv = "lambda,reJ,imJ,absJ,R,flag\n";
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    for (const auto* v : {&at_R[k], &at_2R[k]}) {
      csv += fmt(v->lambda) + "," + fmt(v->re) + "," + fmt(v->im) + "," + fmt(std::hypot(v->re, v->im)) + "," +
             fmt(v->R) + "," + std::to_string(v->flagged) + "\n";
    }
  }
  m.write_text("decay.csv", csv);
  m.summary() = {{"sup_abs", s.sup_abs},      {"sup_lambda", s.sup_lambda}, {"max_rel_change", s.max_rel_change},
                 {"stable", s.stable != 0},   {"edge_growth", s.edge_growth != 0},
                 {"flagged", s.flagged != 0}};
  std::cout << "sup_abs=" << short_fmt(s.sup_abs) << " sup_lambda=" << short_fmt(s.sup_lambda)
            << " max_rel_change=" << short_fmt(s.max_rel_change) << " stable=" << s.stable
            << " edge_growth=" << s.edge_growth << "\n";
  return (!s.stable || s.edge_growth || s.flagged) ? kExitNonConverged : kExitOk;
}

struct EmbedArgs {
  double s = 4.5;
  int draws = 100, max_mode = 16;
};

int run_embed(const EmbedArgs& a, Manifest& m, std::uint64_t seed) {
  std::vector<double> ratios(a.draws > 0 ? a.draws : 0);
  double max_ratio = 0.0;
  check(fkp_embedding_ensemble(a.s, a.draws, seed, a.max_mode, ratios.data(), &max_ratio), "embed");
  std::string csv = "draw,ratio\n";
  for (std::size_t k = 0; k < ratios.size(); ++k) csv += std::to_string(k) + "," + fmt(ratios[k]) + "\n";
  m.write_text("embed.csv", csv);
  m.summary() = {{"s", a.s}, {"draws", a.draws}, {"max_ratio", max_ratio}};
  std::cout << "s=" << short_fmt(a.s) << " draws=" << a.draws << " max_ratio=" << short_fmt(max_ratio) << "\n";
  return kExitOk;
}

int run_critical(double alpha, Manifest& m) {
  fkp_critical c;
  check(fkp_critical_exponents(alpha, &c), "critical");
  m.summary() = {{"alpha", alpha},
                 {"s_alpha", c.s_alpha},
                 {"l2_critical", c.l2_critical},
                 {"energy_critical", c.energy_critical},
                 {"l2_scaling_exponent", c.l2_scaling_exponent}};
  std::cout << "s_alpha=" << short_fmt(c.s_alpha) << " l2_critical=" << short_fmt(c.l2_critical)
            << " energy_critical=" << short_fmt(c.energy_critical) << "\n";
  return kExitOk;
}

// ---- validate-symbol --------------------------------------------------------

struct ValidateArgs {
  std::string symbol = "power";
  double alpha = 0.0;  // 0: the family's own order
  double delta = 1.0, b = 1.0, xi0 = 1.0, band_lo = 0.3, band_hi = 3.5;
  std::string table;
  double table_alpha = 1.0;
};

int run_validate(const ValidateArgs& a, Manifest& m) {
  const double family_alpha = a.symbol == "power" ? (a.alpha > 0.0 ? a.alpha : 2.0) : a.table_alpha;
  const SymbolPtr sym = make_symbol(a.symbol, family_alpha, a.delta, a.b, 1, a.table);
  double alpha = a.alpha;
  if (!(alpha > 0.0)) check(fkp_symbol_alpha(sym.get(), &alpha), "symbol");
  fkp_hypothesis_report r;
  check(fkp_validate_symbol(sym.get(), alpha, a.xi0, a.band_lo, a.band_hi, &r), "validate");
  m.summary() = {{"symbol", a.symbol},
                 {"alpha", r.alpha},
                 {"xi0", r.xi0},
                 {"max_abs_w_low", r.max_abs_w_low},
                 {"ratio_min", {r.ratio_min[0], r.ratio_min[1], r.ratio_min[2]}},
                 {"ratio_max", {r.ratio_max[0], r.ratio_max[1], r.ratio_max[2]}},
                 {"band", {r.band_lo, r.band_hi}},
                 {"pass", r.pass != 0}};
  std::cout << "symbol=" << a.symbol << " alpha=" << short_fmt(r.alpha) << " max_abs_w_low=" << short_fmt(r.max_abs_w_low);
  for (int k = 0; k < 3; ++k)
    std::cout << " ratio" << k << "=[" << short_fmt(r.ratio_min[k]) << "," << short_fmt(r.ratio_max[k]) << "]";
  std::cout << " pass=" << r.pass << "\n";
  return r.pass ? kExitOk : kExitNonConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional KP solver and verification tools"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", [] {
    return std::string("fkp manifest schema ") + std::to_string(fkp_manifest_schema_version()) + " (library " +
           fkp_version() + ", " + fkp_git_describe() + ")";
  });
  app.set_config("--config", "", "Flat key = value file; keys are the long option names");
  app.config_formatter(std::make_shared<FlatConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::uint64_t seed = 1;
  std::string out_dir = "fkp-run";
  app.add_option("--seed", seed, "Seed for Monte-Carlo sampling and ensembles")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "Integrate the equation with IF-RK4");
  evolve->add_option("--symbol", ev.symbol)->check(CLI::IsMember({"power", "ilw", "whitham", "table"}))->capture_default_str();
  evolve->add_option("--alpha", ev.alpha)->capture_default_str();
  evolve->add_option("--delta", ev.delta, "ILW depth")->capture_default_str();
  evolve->add_option("--b", ev.b, "Surface tension coefficient")->capture_default_str();
  evolve->add_option("--table", ev.table, "Symbol table CSV for --symbol table");
  evolve->add_option("--kappa", ev.kappa)->check(CLI::IsMember({1, -1}))->capture_default_str();
  evolve->add_option("--init", ev.init, "soliton, gaussian or file:<path>")->capture_default_str();
  evolve->add_option("--amplitude", ev.amplitude)->capture_default_str();
  evolve->add_option("--width", ev.width)->capture_default_str();
  evolve->add_option("--speed", ev.speed, "Soliton speed")->capture_default_str();
  evolve->add_option("--nx", ev.nx)->capture_default_str();
  evolve->add_option("--ny", ev.ny)->capture_default_str();
  evolve->add_option("--lx", ev.lx)->capture_default_str();
  evolve->add_option("--ly", ev.ly)->capture_default_str();
  evolve->add_option("--dt", ev.dt)->capture_default_str();
  evolve->add_option("--t-end,--t_end", ev.t_end)->capture_default_str();
  evolve->add_option("--snapshot-every,--snapshot_every", ev.snapshot_every)->capture_default_str();
  evolve->add_option("--diagnostics-every,--diagnostics_every", ev.diagnostics_every)->capture_default_str();
  evolve->add_option("--xs-order,--xs_order", ev.xs_order)->capture_default_str();
  evolve->add_flag("--no-dealias,--no_dealias", ev.no_dealias);
  evolve->add_flag("--linear-only,--linear_only", ev.linear_only);

  ResonanceArgs rs;
  auto* res = app.add_subcommand("resonance-scan", "Second Picard iterate growth in N");
  res->add_option("--variant", rs.variant)->check(CLI::IsMember({"fkp2", "fkp1"}))->capture_default_str();
  res->add_option("--alpha", rs.alpha)->capture_default_str();
  res->add_option("--theta", rs.theta)->capture_default_str();
  res->add_option("--s1", rs.s1)->capture_default_str();
  res->add_option("--s2", rs.s2)->capture_default_str();
  res->add_option("--N-list,--N_list", rs.N_list)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  res->add_option("--t", rs.t)->capture_default_str();
  res->add_option("--samples", rs.samples, "Monte-Carlo samples for the magnitude check")->capture_default_str();
  res->add_option("--order", rs.order)->capture_default_str();

  ConstraintArgs cs;
  auto* con = app.add_subcommand("constraint-demo", "Generalised x-mass of the free evolution");
  con->add_option("--alpha", cs.alpha)->capture_default_str();
  con->add_option("--kappa", cs.kappa)->check(CLI::IsMember({1, -1}))->capture_default_str();
  con->add_option("--datum", cs.datum, "gaussian or gaussian_dx")->capture_default_str();
  con->add_option("--sigma", cs.sigma)->capture_default_str();
  con->add_option("--amplitude", cs.amplitude)->capture_default_str();
  con->add_option("--t", cs.t)->capture_default_str();
  con->add_option("--y", cs.y)->capture_default_str();
  con->add_option("--X-max,--X_max", cs.X_max)->capture_default_str();
  con->add_option("--X-steps,--X_steps", cs.X_steps)->capture_default_str();
  con->add_option("--exclusion,--xi_min_exclusion", cs.exclusion)->capture_default_str();
  con->add_option("--xi-max,--xi_max", cs.xi_max, "0 selects 12 sigma")->capture_default_str();
  con->add_option("--n-xi,--n_xi", cs.n_xi)->capture_default_str();
  con->add_option("--taper", cs.taper)->capture_default_str();
  con->add_option("--refine-tol,--refine_tol", cs.refine_tol)->capture_default_str();

  auto* ineq = app.add_subcommand("ineq", "Functional inequality checks");
  ineq->require_subcommand(1);
  GnArgs gs;
  auto* gn = ineq->add_subcommand("gn", "Gagliardo-Nirenberg ratio and dilation scan");
  gn->add_option("--alpha", gs.alpha)->capture_default_str();
  gn->add_option("--nx", gs.nx)->capture_default_str();
  gn->add_option("--ny", gs.ny)->capture_default_str();
  gn->add_option("--lx", gs.lx)->capture_default_str();
  gn->add_option("--ly", gs.ly)->capture_default_str();
  gn->add_option("--width", gs.width)->capture_default_str();
  gn->add_option("--shape", gs.shape, "gaussian or gaussian_dx")->capture_default_str();
  gn->add_option("--min-pow,--min_pow", gs.min_pow)->capture_default_str();
  gn->add_option("--max-pow,--max_pow", gs.max_pow)->capture_default_str();
  DecayArgs ds;
  auto* decay = ineq->add_subcommand("decay", "Oscillatory kernel J(lambda) scan");
  decay->add_option("--alpha", ds.alpha)->capture_default_str();
  decay->add_option("--R", ds.R)->capture_default_str();
  decay->add_option("--lambda-min,--lambda_min", ds.lambda_min)->capture_default_str();
  decay->add_option("--lambda-max,--lambda_max", ds.lambda_max)->capture_default_str();
  decay->add_option("--lambda-steps,--lambda_steps", ds.lambda_steps)->capture_default_str();
  EmbedArgs es;
  auto* embed = ineq->add_subcommand("embed", "Embedding ratio ensemble");
  embed->add_option("--s", es.s)->capture_default_str();
  embed->add_option("--draws", es.draws)->capture_default_str();
  embed->add_option("--max-mode,--max_mode", es.max_mode)->capture_default_str();
  double crit_alpha = 2.0;
  auto* crit = ineq->add_subcommand("critical", "Critical exponent table");
  crit->add_option("--alpha", crit_alpha)->capture_default_str();

  ValidateArgs vs;
  auto* val = app.add_subcommand("validate-symbol", "Check the symbol growth hypotheses");
  val->add_option("--symbol", vs.symbol)->check(CLI::IsMember({"power", "ilw", "whitham", "table"}))->capture_default_str();
  val->add_option("--alpha", vs.alpha, "Growth order to test (default: the family's)")->capture_default_str();
  val->add_option("--delta", vs.delta)->capture_default_str();
  val->add_option("--b", vs.b)->capture_default_str();
  val->add_option("--table", vs.table);
  val->add_option("--table-alpha,--table_alpha", vs.table_alpha)->capture_default_str();
  val->add_option("--xi0", vs.xi0)->capture_default_str();
  val->add_option("--band-lo,--band_lo", vs.band_lo)->capture_default_str();
  val->add_option("--band-hi,--band_hi", vs.band_hi)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitPrecondition;
  }

  std::string command;
  for (const CLI::App* a = &app;;) {
    const auto subs = a->get_subcommands();
    if (subs.empty()) break;
    a = subs.front();
    command += (command.empty() ? "" : " ") + a->get_name();
  }
  Manifest manifest(command, std::vector<std::string>(argv, argv + argc));
  manifest.set_out_dir(out_dir);
  manifest.set_seed(seed);
  if (auto* c = app.get_config_ptr(); c && c->count() > 0) manifest.set_config(c->as<std::string>());

  int code = kExitOk;
  try {
    if (evolve->parsed()) code = run_evolve(ev, manifest);
    else if (res->parsed()) code = run_resonance(rs, manifest, seed);
    else if (con->parsed()) code = run_constraint(cs, manifest);
    else if (gn->parsed()) code = run_gn(gs, manifest);
    else if (decay->parsed()) code = run_decay(ds, manifest);
    else if (embed->parsed()) code = run_embed(es, manifest, seed);
    else if (crit->parsed()) code = run_critical(crit_alpha, manifest);
    else if (val->parsed()) code = run_validate(vs, manifest);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    code = f.code;
    manifest.summary()["error"] = f.message;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = 1;
    manifest.summary()["error"] = e.what();
  }
  try {
    manifest.finish(code);
  } catch (const std::exception& e) {
    std::cerr << "error: manifest: " << e.what() << "\n";
    return code == kExitOk ? 1 : code;
  } catch (const Failure& f) {
    std::cerr << "error: manifest: " << f.message << "\n";
    return code == kExitOk ? 1 : code;
  }
  return code;
}
