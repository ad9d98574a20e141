#include "cli.hpp"

#include "autophage/charfn.hpp"
#include "autophage/decay.hpp"
#include "autophage/density.hpp"
#include "autophage/error.hpp"
#include "autophage/gaussian.hpp"
#include "autophage/io.hpp"
#include "autophage/linops.hpp"
#include "autophage/padic.hpp"
#include "autophage/qmc.hpp"
#include "autophage/sampler.hpp"
#include "autophage/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>

namespace autophage::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// Like num but always shows a decimal point for finite values ("1.0").
std::string decimal(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s = buf;
  if (std::isfinite(x) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string point(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + ")";
}

std::optional<double> parse_number(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) return std::nullopt;
  return x;
}

/// File path (.json/.csv) or a number c standing for c * I in dimension dim.
LinearMap matrix_arg(const std::string& flag, const std::string& value, std::size_t dim) {
  if (fs::exists(value)) {
    LinearMap a = io::read_matrix(value);
    if (a.dim() != dim) throw UsageError(flag + ": matrix has dim " + std::to_string(a.dim()) + ", expected " +
                                         std::to_string(dim) + " (set --dim)");
    return a;
  }
  if (const auto x = parse_number(value)) return LinearMap::scalar(dim, *x);
  throw UsageError(flag + ": '" + value + "' is neither a file nor a number");
}

struct ModelArgs {
  std::string model;
  std::size_t dim = 1;
  double alpha = 1.0;
  double scale = 1.0;
};

/// JSON file or one of: gaussian (P = scale * I), cauchy, sym_stable, uniform.
CharFnModel model_arg(const ModelArgs& m) {
  if (fs::exists(m.model)) {
    CharFnModel model = io::model_from_json(io::read_json(m.model));
    if (model.dim() != m.dim) throw UsageError("--model: model has dim " + std::to_string(model.dim()) +
                                               ", expected " + std::to_string(m.dim) + " (set --dim)");
    return model;
  }
  if (m.model == "gaussian") return CharFnModel::gaussian(LinearMap::scalar(m.dim, m.scale));
  if (m.model == "cauchy") return CharFnModel::sym_stable(1.0, m.scale, m.dim);
  if (m.model == "sym_stable") return CharFnModel::sym_stable(m.alpha, m.scale, m.dim);
  if (m.model == "uniform") return CharFnModel::uniform_box(Vector(m.dim, m.scale));
  throw UsageError("--model: '" + m.model + "' is not a file or one of gaussian, cauchy, sym_stable, uniform");
}

void add_model_options(CLI::App* sub, ModelArgs& m, bool required) {
  auto* opt = sub->add_option("--model", m.model, "model JSON file or gaussian|cauchy|sym_stable|uniform");
  if (required) opt->required();
  sub->add_option("--dim", m.dim, "dimension for scalar matrices and named models")->check(CLI::Range(1, 16));
  sub->add_option("--alpha", m.alpha, "stability index for sym_stable")->check(CLI::Range(0.0, 2.0));
  sub->add_option("--scale", m.scale, "scale of named models (Gaussian: P = scale I)")->check(CLI::PositiveNumber);
}

struct SeedArgs {
  std::string kind = "gaussian";
  double scale = 1.0;
};

void add_seed_options(CLI::App* sub, SeedArgs& s) {
  sub->add_option("--seed-kind", s.kind, "gaussian (Cov = scale I) | uniform (half-width scale) | point")
      ->check(CLI::IsMember({"gaussian", "uniform", "point"}));
  sub->add_option("--seed-scale", s.scale, "seed scale")->check(CLI::PositiveNumber);
}

SeedDistribution seed_arg(const SeedArgs& s, std::size_t dim) {
  if (s.kind == "gaussian") return SeedDistribution::gaussian(LinearMap::scalar(dim, s.scale));
  if (s.kind == "uniform") return SeedDistribution::uniform_box(Vector(dim, s.scale));
  Vector x(dim, 0.0);
  x[0] = s.scale;
  return SeedDistribution::point(x);
}

EvaluationSet evaluation_set(std::size_t dim, std::optional<double> half_width, std::optional<std::size_t> points) {
  if (dim > 3 && !half_width && !points) return qmc::box_points(512, dim, 4.0);
  GridSpec grid = GridSpec::default_for(dim);
  if (half_width) grid.half_width = *half_width;
  if (points) grid.points = *points;
  grid.validate();
  return grid;
}

std::string matrix_block(const LinearMap& a) {
  std::string s;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    s += "  ";
    for (std::size_t j = 0; j < a.dim(); ++j) s += (j ? " " : "") + num(a(i, j));
    s += '\n';
  }
  return s;
}

struct Context {
  std::ostream& out;
  fs::path out_dir;

  fs::path resolve(const std::string& name) const {
    const fs::path p(name);
    return p.is_absolute() ? p : out_dir / p;
  }
};

// ---------------------------------------------------------------------------
// Subcommands

struct CofactorArgs {
  std::string form, t;
  std::size_t dim = 1;
  double tol = 1e-10;
  std::string out = "gaussian_spec.json";
};

int cmd_gaussian_cofactor(const Context& ctx, const CofactorArgs& a) {
  const LinearMap form = matrix_arg("--P", a.form, a.dim);
  const LinearMap t = matrix_arg("--T", a.t, a.dim);
  const GaussianSpec spec = make_gaussian_spec(form, t);
  const double residual = covariance_residual(spec.form, spec.t, spec.s);
  io::write_json(ctx.resolve(a.out), io::gaussian_spec_to_json(spec));
  ctx.out << "S =\n" << matrix_block(spec.s) << "covariance_residual = " << num(residual) << '\n';
  if (residual > a.tol) {
    ctx.out << "FAIL: residual above tolerance " << num(a.tol) << '\n';
    return kVerificationFailure;
  }
  return kOk;
}

struct VerifyArgs {
  ModelArgs model;
  std::string t, s;
  std::optional<double> half_width;
  std::optional<std::size_t> points;
  double tol = 1e-9;
  bool fullness = false;
  std::string out = "autophage_report.json";
};

int cmd_verify_autophage(const Context& ctx, const VerifyArgs& a) {
  const CharFnModel model = model_arg(a.model);
  const LinearMap t = matrix_arg("--T", a.t, model.dim());
  const LinearMap s = matrix_arg("--S", a.s, model.dim());
  Json report{{"model", io::model_to_json(model)}, {"T", io::matrix_to_json(t)}, {"S", io::matrix_to_json(s)}};

  const double comm_norm = operator_norm(commutator(t, s));
  report["commutator_norm"] = comm_norm;
  ctx.out << "commutator_norm = " << num(comm_norm) << '\n';
  bool ok = comm_norm <= commutation_tolerance(t, s);
  if (!ok) ctx.out << "FAIL: T and S do not commute\n";

  const EvaluationSet set = evaluation_set(model.dim(), a.half_width, a.points);
  const ResidualReport res = autophage_residual(model, t, s, set);
  report["max_residual"] = res.max_residual;
  report["worst_point"] = res.worst_point;
  report["points"] = res.points;
  report["tolerance"] = a.tol;
  ctx.out << "max_residual = " << num(res.max_residual) << " at " << point(res.worst_point) << " over "
          << res.points << " points\n";
  if (res.max_residual > a.tol) {
    ctx.out << "FAIL: residual above tolerance " << num(a.tol) << '\n';
    ok = false;
  }

  if (a.fullness) {
    const FullnessVerdict v = fullness_check(model, set);
    report["fullness"] = {{"witness_found", v.witness_found}, {"witness", v.witness}, {"modulus", v.modulus}};
    ctx.out << "fullness: " << (v.witness_found ? "witness " + point(v.witness) + " (not full)" : "no witness found")
            << '\n';
  }
  report["verified"] = ok;
  io::write_json(ctx.resolve(a.out), report);
  return ok ? kOk : kVerificationFailure;
}

struct DecayArgs {
  std::optional<double> t, s;
  std::optional<std::string> tm, sm;
  ModelArgs model;
  std::size_t rays = 64, radii = 64;
  double max_radius = 20.0;
  std::string out = "decay_bound.csv";
  std::string profile_out = "decay_profile.json";
};

int cmd_decay(const Context& ctx, const DecayArgs& a) {
  std::vector<LinearMap> maps;
  if (a.tm || a.sm) {
    if (!a.tm || !a.sm) throw UsageError("--T and --S must be given together");
    maps = {matrix_arg("--T", *a.tm, a.model.dim), matrix_arg("--S", *a.sm, a.model.dim)};
  } else {
    if (!a.t || !a.s) throw UsageError("give --t and --s, or --T and --S");
    maps = {LinearMap::scalar(a.model.dim, *a.t), LinearMap::scalar(a.model.dim, *a.s)};
  }
  const FactorPair f = inverse_adjoint_norms(maps[0], maps[1]);
  const double r = solve_exponent(f.t, f.s);
  ctx.out << "r = " << decimal(r) << '\n';
  if (a.model.model.empty()) return kOk;

  const CharFnModel model = model_arg(a.model);
  const DecayProfile profile = decay_profile(model, maps);
  const auto rays = qmc::sphere_directions(a.rays, model.dim());
  const auto radii = bound_radii(a.radii, a.max_radius);
  const BoundReport report = verify_bound(model, profile.r, profile.c, rays, radii);
  io::write_text(ctx.resolve(a.out), io::bound_report_csv(report));
  Json pj = io::decay_profile_to_json(profile);
  pj["violations"] = report.violations.size();
  io::write_json(ctx.resolve(a.profile_out), pj);
  ctx.out << "c = " << num(profile.c) << " (argmin " << point(profile.argmin) << ")\n"
          << "bound checks = " << report.rows.size() << ", violations = " << report.violations.size() << '\n';
  return report.violations.empty() ? kOk : kVerificationFailure;
}

struct DensityArgs {
  ModelArgs model;
  double half_width = 20.0;
  std::size_t points = 512;
  std::size_t oversample = 8;
  std::string out = "density.csv";
};

int cmd_density(const Context& ctx, const DensityArgs& a) {
  const CharFnModel model = model_arg(a.model);
  GridSpec grid{model.dim(), a.half_width, a.points};
  InversionOptions opts;
  opts.oversample = a.oversample;
  const GridDensity gd = invert_to_density(model, grid, opts);
  const fs::path csv = ctx.resolve(a.out);
  io::write_text(csv, io::density_csv(gd));
  fs::path meta = csv;
  meta.replace_extension(".json");
  io::write_json(meta, io::density_metadata(gd));
  ctx.out << "density(0) = " << num(gd.value_at_origin()) << '\n'
          << "mass = " << num(gd.total_mass) << '\n'
          << "sup = " << num(gd.sup_value) << ", min = " << num(gd.min_value) << '\n'
          << "spacing = " << num(gd.spacing) << ", points = " << gd.points << " per axis\n";
  return kOk;
}

struct SampleArgs {
  std::string t, s;
  std::size_t dim = 1;
  SeedArgs seed;
  unsigned depth = 12;
  std::size_t count = 10000;
  std::uint64_t rng_seed = 0;
  std::string out = "samples.csv";
};

int cmd_sample(const Context& ctx, const SampleArgs& a) {
  const LinearMap t = matrix_arg("--T", a.t, a.dim);
  const LinearMap s = matrix_arg("--S", a.s, a.dim);
  const SeedDistribution seed = seed_arg(a.seed, a.dim);
  const SampleBatch batch = tree_sample(t, s, seed, a.depth, a.count, a.rng_seed);
  io::write_text(ctx.resolve(a.out), io::batch_csv(batch));
  const LinearMap predicted = tree_covariance(t, s, seed, a.depth);
  ctx.out << "words = " << batch.word_count << ", samples = " << batch.points.size() << '\n'
          << "empirical covariance =\n"
          << matrix_block(empirical_covariance(batch)) << "level covariance =\n"
          << matrix_block(predicted);
  if (a.dim == 1 && predicted(0, 0) > 0.0) {
    std::vector<double> xs;
    for (const auto& x : batch.points) xs.push_back(x[0]);
    const double sd = std::sqrt(predicted(0, 0));
    const double ks = stats::ks_statistic(xs, [sd](double x) { return stats::normal_cdf(x, 0.0, sd); });
    ctx.out << "ks_normal = " << num(ks) << '\n';
  }
  return kOk;
}

struct InfinitesimalArgs {
  std::string t, s;
  std::size_t dim = 1;
  SeedArgs seed;
  double epsilon = 0.1;
  unsigned n_max = 20;
  std::size_t count = 10000;
  std::uint64_t rng_seed = 0;
  double level = 0.01;
  std::string out = "infinitesimal.csv";
};

int cmd_infinitesimal(const Context& ctx, const InfinitesimalArgs& a) {
  const LinearMap t = matrix_arg("--T", a.t, a.dim);
  const LinearMap s = matrix_arg("--S", a.s, a.dim);
  const SeedDistribution seed = seed_arg(a.seed, a.dim);
  const auto profile = infinitesimality_profile(t, s, seed, a.epsilon, a.n_max, a.count, a.rng_seed);
  std::string csv = "n,p_n\n";
  for (std::size_t n = 0; n < profile.size(); ++n) csv += std::to_string(n) + ',' + io::format_double(profile[n]) + '\n';
  io::write_text(ctx.resolve(a.out), csv);
  for (std::size_t n = 0; n < profile.size(); ++n) ctx.out << "p_" << n << " = " << num(profile[n]) << '\n';
  try {
    ctx.out << "chebyshev_index = " << chebyshev_index(t, s, seed, a.epsilon, a.level) << '\n';
  } catch (const std::domain_error&) {
    ctx.out << "chebyshev_index = none within cap\n";
  }
  if (profile.back() > a.level) {
    ctx.out << "FAIL: p_" << a.n_max << " above level " << num(a.level) << '\n';
    return kVerificationFailure;
  }
  return kOk;
}

struct PadicArgs {
  unsigned p = 2, m = 4, k = 10;
  std::string measure = "stable";
  int j = 0;
  std::optional<double> r;
  double c = 1.0;
  padic::Scaling t{}, s{};
  double tol = 1e-6;
  bool dense = false;
  std::string out = "padic.json";
};

int cmd_padic_verify(const Context& ctx, const PadicArgs& a) {
  const padic::Quotient q(a.p, a.m, a.k);
  const double r = a.r.value_or(padic::autophage_exponent(a.p));
  const padic::RadialMeasure haar_zp = padic::RadialMeasure::haar_ball(q, 0);
  Json report{{"p", a.p}, {"m", a.m}, {"k", a.k}, {"measure", a.measure}};

  double residual = 0.0, tv_haar = 0.0;
  padic::SubgroupReport sub;
  if (a.dense) {
    padic::QuotientMeasure mu = a.measure == "stable" ? padic::padic_stable(q, r, a.c)
                                : a.measure == "haar" ? padic::QuotientMeasure::haar_ball(q, a.j)
                                                      : padic::QuotientMeasure::dirac(q, 0);
    residual = padic::autophage_residual_padic(mu, a.t, a.s);
    tv_haar = padic::total_variation(mu, haar_zp.to_dense());
    sub = padic::unit_modulus_subgroup(mu, a.t, a.s);
    report["weights"] = io::quotient_measure_to_json(mu)["weights"];
  } else {
    padic::RadialMeasure mu = a.measure == "stable" ? padic::RadialMeasure::stable(q, r, a.c)
                              : a.measure == "haar" ? padic::RadialMeasure::haar_ball(q, a.j)
                                                    : padic::RadialMeasure::dirac_zero(q);
    residual = padic::autophage_residual_padic(mu, a.t, a.s);
    tv_haar = padic::total_variation(mu, haar_zp);
    sub = padic::unit_modulus_subgroup(mu, a.t, a.s);
    const auto c = mu.coefficients();
    report["ball_coefficients"] = std::vector<double>(c.begin(), c.end());
  }
  if (a.measure == "stable") {
    report["r"] = r;
    report["c"] = a.c;
  }
  const int gen_exp = static_cast<int>(sub.generator_valuation) - static_cast<int>(a.k);
  report["residual_tv"] = residual;
  report["tv_to_haar_zp"] = tv_haar;
  report["unit_modulus_subgroup"] = {{"order", sub.order},
                                     {"generator_valuation", sub.generator_valuation},
                                     {"full", sub.full},
                                     {"invariant_under_pair", sub.invariant_under_pair},
                                     {"steps_to_trivial", sub.steps_to_trivial}};
  io::write_json(ctx.resolve(a.out), report);

  ctx.out << "tv(mu, T(mu)*S(mu)) = " << num(residual) << '\n'
          << "tv(mu, haar(Z_p)) = " << num(tv_haar) << '\n'
          << "K order = " << sub.order << ", generator = "
          << (sub.full ? std::string("0") : "p^" + std::to_string(gen_exp)) << '\n'
          << "K = T*(K) + S*(K): " << (sub.invariant_under_pair ? "yes" : "no")
          << ", steps to {0} = " << sub.steps_to_trivial << '\n'
          << (sub.full ? "full at this precision\n" : "not full: nontrivial idempotent factor\n");
  if (residual > a.tol) {
    ctx.out << "FAIL: residual above tolerance " << num(a.tol) << '\n';
    return kVerificationFailure;
  }
  return kOk;
}

struct SemistableArgs {
  double alpha = 1.0;
  unsigned n = 2;
  double scale = 1.0;
  std::size_t dim = 1;
  double tol = 1e-10;
  std::size_t points = 4096;
  std::string out = "semistable_density.csv";
};

int cmd_semistable_check(const Context& ctx, const SemistableArgs& a) {
  const CharFnModel model = CharFnModel::sym_stable(a.alpha, a.scale, a.dim);
  const LinearMap t = LinearMap::scalar(a.dim, std::pow(static_cast<double>(a.n), -1.0 / a.alpha));
  const SemistableReport sr = semistable_residual(model, t, a.n, GridSpec::default_for(a.dim));
  ctx.out << "semistable_residual = " << num(sr.max_residual) << '\n';

  CertifyOptions opts;
  opts.points = a.points;
  const std::vector<LinearMap> maps(a.n, t);
  const DensityCertificate cert = certify_density(model, maps, opts);
  io::write_text(ctx.resolve(a.out), io::density_csv(cert.density));
  ctx.out << "r = " << num(cert.profile.r) << ", c = " << num(cert.profile.c) << '\n'
          << "bound violations = " << cert.bound.violations.size() << '\n'
          << "sup = " << num(cert.density.sup_value) << " <= " << num(cert.integrability / std::pow(2.0 * std::numbers::pi, static_cast<double>(a.dim)))
          << (cert.bounded ? " ok" : " FAIL") << '\n'
          << "continuity modulus = " << num(cert.diagnostics.continuity_modulus)
          << (cert.continuous ? " ok" : " FAIL") << '\n'
          << "min = " << num(cert.diagnostics.min_value) << (cert.nonnegative ? " ok" : " FAIL") << '\n';
  const bool ok = sr.max_residual <= a.tol && cert.certified();
  ctx.out << (ok ? "certified: bounded continuous density\n" : "FAIL: not certified\n");
  return ok ? kOk : kVerificationFailure;
}

// ---------------------------------------------------------------------------

fs::path default_out_dir() {
  if (const char* env = std::getenv("AUTOPHAGE_OUT_DIR"); env && *env) return env;
  return ".";
}

/// Flat JSON object -> "--key value" tokens for the chosen subcommand.
std::vector<std::string> config_tokens(const fs::path& path, CLI::App* sub) {
  const Json j = io::read_json(path);
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : j.items()) {
    if (key == "config" || sub->get_option_no_throw("--" + key) == nullptr)
      throw UsageError("config: unknown key '" + key + "' for " + sub->get_name());
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      tokens.insert(tokens.end(), {"--" + key, value.dump()});
    } else if (value.is_number()) {
      tokens.insert(tokens.end(), {"--" + key, io::format_double(value.get<double>())});
    } else if (value.is_string()) {
      tokens.insert(tokens.end(), {"--" + key, value.get<std::string>()});
    } else {
      throw UsageError("config: key '" + key + "' must be a scalar");
    }
  }
  return tokens;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Autophage measures: construction, verification, decay, densities, sampling, p-adic models",
               "autophage-cli"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string out_dir = default_out_dir().string();
  std::string config;
  std::function<int(const Context&)> action;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", out_dir, "output directory (default $AUTOPHAGE_OUT_DIR or .)");
    sub->add_option("--config", config, "flat JSON object of option values; flags override it");
  };

  CofactorArgs cof;
  auto* s_cof = app.add_subcommand("gaussian-cofactor", "S = sqrt(I - T^2) with TPT* + SPS* = P");
  s_cof->add_option("--P", cof.form, "covariance form (file or scalar)")->required();
  s_cof->add_option("--T", cof.t, "symmetric contraction commuting with P")->required();
  s_cof->add_option("--dim", cof.dim)->check(CLI::Range(1, 16));
  s_cof->add_option("--tol", cof.tol)->check(CLI::PositiveNumber);
  s_cof->add_option("--out", cof.out, "output JSON with P, T and S");
  common(s_cof);
  s_cof->callback([&] { action = [&](const Context& c) { return cmd_gaussian_cofactor(c, cof); }; });

  VerifyArgs ver;
  auto* s_ver = app.add_subcommand("verify-autophage", "max |phi(v) - phi(T*v) phi(S*v)| on a grid");
  add_model_options(s_ver, ver.model, true);
  s_ver->add_option("--T", ver.t)->required();
  s_ver->add_option("--S", ver.s)->required();
  s_ver->add_option("--half-width", ver.half_width, "frequency grid half-width")->check(CLI::PositiveNumber);
  s_ver->add_option("--points", ver.points, "frequency grid points per axis")->check(CLI::Range(2, 1 << 20));
  s_ver->add_option("--tol", ver.tol)->check(CLI::PositiveNumber);
  s_ver->add_flag("--fullness", ver.fullness, "also search for |phi(v)| = 1 off the origin");
  s_ver->add_option("--out", ver.out, "report JSON");
  common(s_ver);
  s_ver->callback([&] { action = [&](const Context& c) { return cmd_verify_autophage(c, ver); }; });

  DecayArgs dec;
  auto* s_dec = app.add_subcommand("decay", "decay exponent r, constant c and tail-bound table");
  s_dec->add_option("--t", dec.t, "inverse adjoint norm of T")->check(CLI::Range(0.0, 1.0));
  s_dec->add_option("--s", dec.s, "inverse adjoint norm of S")->check(CLI::Range(0.0, 1.0));
  s_dec->add_option("--T", dec.tm, "matrix T (file or scalar)");
  s_dec->add_option("--S", dec.sm, "matrix S (file or scalar)");
  add_model_options(s_dec, dec.model, false);
  s_dec->add_option("--rays", dec.rays)->check(CLI::Range(1, 100000));
  s_dec->add_option("--radii", dec.radii)->check(CLI::Range(1, 100000));
  s_dec->add_option("--max-radius", dec.max_radius)->check(CLI::Range(1.0, 1e6));
  s_dec->add_option("--out", dec.out, "bound table CSV");
  s_dec->add_option("--profile-out", dec.profile_out, "profile JSON");
  common(s_dec);
  s_dec->callback([&] { action = [&](const Context& c) { return cmd_decay(c, dec); }; });

  DensityArgs den;
  auto* s_den = app.add_subcommand("density", "Fourier inversion to a lattice density");
  add_model_options(s_den, den.model, true);
  s_den->add_option("--L", den.half_width, "frequency half-width")->check(CLI::PositiveNumber);
  s_den->add_option("--N", den.points, "frequency points per axis (even)")->check(CLI::Range(2, 1 << 22));
  s_den->add_option("--oversample", den.oversample)->check(CLI::Range(1, 64));
  s_den->add_option("--out", den.out, "density CSV (metadata JSON alongside)");
  common(s_den);
  s_den->callback([&] { action = [&](const Context& c) { return cmd_density(c, den); }; });

  SampleArgs smp;
  auto* s_smp = app.add_subcommand("sample", "tree sampling of the level-n decomposition");
  s_smp->add_option("--T", smp.t)->required();
  s_smp->add_option("--S", smp.s)->required();
  s_smp->add_option("--dim", smp.dim)->check(CLI::Range(1, 16));
  add_seed_options(s_smp, smp.seed);
  s_smp->add_option("--depth", smp.depth)->check(CLI::Range(0u, kMaxTreeDepth));
  s_smp->add_option("--count", smp.count)->check(CLI::Range(1, 10000000));
  s_smp->add_option("--rng-seed", smp.rng_seed);
  s_smp->add_option("--out", smp.out, "samples CSV");
  common(s_smp);
  s_smp->callback([&] { action = [&](const Context& c) { return cmd_sample(c, smp); }; });

  InfinitesimalArgs inf;
  auto* s_inf = app.add_subcommand("infinitesimal", "p_n = max over words of P(|alpha Y| > epsilon)");
  s_inf->add_option("--T", inf.t)->required();
  s_inf->add_option("--S", inf.s)->required();
  s_inf->add_option("--dim", inf.dim)->check(CLI::Range(1, 16));
  add_seed_options(s_inf, inf.seed);
  s_inf->add_option("--epsilon", inf.epsilon)->check(CLI::PositiveNumber);
  s_inf->add_option("--n-max", inf.n_max)->check(CLI::Range(0u, kDefaultWordDepthCap));
  s_inf->add_option("--count", inf.count)->check(CLI::Range(1, 10000000));
  s_inf->add_option("--rng-seed", inf.rng_seed);
  s_inf->add_option("--level", inf.level)->check(CLI::Range(0.0, 1.0));
  s_inf->add_option("--out", inf.out, "profile CSV");
  common(s_inf);
  s_inf->callback([&] { action = [&](const Context& c) { return cmd_infinitesimal(c, inf); }; });

  PadicArgs pad;
  auto* s_pad = app.add_subcommand("padic-verify", "autophage residual and unit-modulus subgroup on Q_p");
  s_pad->add_option("--p", pad.p, "prime")->required();
  s_pad->add_option("--m", pad.m)->check(CLI::Range(0u, 60u));
  s_pad->add_option("--k", pad.k)->check(CLI::Range(1u, 60u));
  s_pad->add_option("--measure", pad.measure)->check(CLI::IsMember({"stable", "haar", "dirac"}));
  s_pad->add_option("--j", pad.j, "Haar measure of p^j Z_p");
  s_pad->add_option("--r", pad.r, "stable exponent (default ln 2 / ln p)")->check(CLI::PositiveNumber);
  s_pad->add_option("--c", pad.c, "stable scale")->check(CLI::PositiveNumber);
  s_pad->add_option("--t-power", pad.t.power);
  s_pad->add_option("--t-unit", pad.t.unit);
  s_pad->add_option("--s-power", pad.s.power);
  s_pad->add_option("--s-unit", pad.s.unit);
  s_pad->add_option("--tol", pad.tol)->check(CLI::PositiveNumber);
  s_pad->add_flag("--dense", pad.dense, "one weight per group element instead of ball coefficients");
  s_pad->add_option("--out", pad.out, "report JSON");
  common(s_pad);
  s_pad->callback([&] { action = [&](const Context& c) { return cmd_padic_verify(c, pad); }; });

  SemistableArgs sem;
  auto* s_sem = app.add_subcommand("semistable-check", "T(mu^n) = mu for SymStable with T = n^{-1/alpha}");
  s_sem->add_option("--alpha", sem.alpha)->required()->check(CLI::Range(0.0, 2.0));
  s_sem->add_option("--n", sem.n)->check(CLI::Range(2u, 64u));
  s_sem->add_option("--scale", sem.scale)->check(CLI::PositiveNumber);
  s_sem->add_option("--dim", sem.dim)->check(CLI::Range(1, 3));
  s_sem->add_option("--tol", sem.tol)->check(CLI::PositiveNumber);
  s_sem->add_option("--points", sem.points)->check(CLI::Range(2, 1 << 20));
  s_sem->add_option("--out", sem.out, "density CSV");
  common(s_sem);
  s_sem->callback([&] { action = [&](const Context& c) { return cmd_semistable_check(c, sem); }; });

  try {
    std::vector<std::string> tokens = args;
    // Splice config values right after the subcommand name so later flags win.
    if (!tokens.empty()) {
      if (CLI::App* sub = app.get_subcommand_no_throw(tokens.front())) {
        for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
          if (tokens[i] == "--config") {
            const auto extra = config_tokens(tokens[i + 1], sub);
            tokens.insert(tokens.begin() + 1, extra.begin(), extra.end());
            break;
          }
        }
      }
    }
    std::reverse(tokens.begin(), tokens.end());
    app.parse(tokens);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    const Context ctx{out, fs::path(out_dir)};
    return action(ctx);
  } catch (const VerificationError& e) {
    out << "FAIL: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const AliasingError& e) {
    out << "FAIL: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const NonCommutingError& e) {
    out << "FAIL: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace autophage::cli
