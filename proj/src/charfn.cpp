#include "autophage/charfn.hpp"

#include "autophage/qmc.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace autophage {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

Vector adjoint_apply(const LinearMap& a, std::span<const double> v) {
  const std::size_t d = a.dim();
  Vector out(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += a(j, i) * v[j];
    out[i] = acc;
  }
  return out;
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

CharFnModel CharFnModel::gaussian(LinearMap form) {
  const double scale = std::max(1.0, form.max_abs());
  if (!form.is_symmetric(1e-12 * scale)) throw std::invalid_argument("Gaussian: P must be symmetric");
  if (symmetric_eigen(form).values.front() < -1e-12 * scale)
    throw std::invalid_argument("Gaussian: P must be positive semidefinite");
  const std::size_t d = form.dim();
  return CharFnModel(GaussianModel{std::move(form)}, d);
}

CharFnModel CharFnModel::sym_stable(double alpha, double scale, std::size_t dim) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("SymStable: alpha must lie in (0, 2]");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("SymStable: scale must be positive");
  if (dim == 0) throw std::invalid_argument("SymStable: dim must be >= 1");
  return CharFnModel(SymStableModel{alpha, scale, dim}, dim);
}

CharFnModel CharFnModel::word_product(CharFnModel base, std::vector<LinearMap> words) {
  const std::size_t d = base.dim();
  for (const auto& w : words)
    if (w.dim() != d) throw std::invalid_argument("WordProduct: word dimension mismatch");
  return CharFnModel(WordProductModel{std::make_shared<const CharFnModel>(std::move(base)), std::move(words)}, d);
}

CharFnModel CharFnModel::empirical(std::vector<Vector> samples) {
  if (samples.empty()) throw std::invalid_argument("Empirical: needs at least one sample");
  const std::size_t d = samples.front().size();
  if (d == 0) throw std::invalid_argument("Empirical: samples must have dim >= 1");
  for (const auto& s : samples)
    if (s.size() != d) throw std::invalid_argument("Empirical: ragged samples");
  return CharFnModel(EmpiricalModel{std::move(samples)}, d);
}

CharFnModel CharFnModel::uniform_box(Vector half_widths) {
  if (half_widths.empty()) throw std::invalid_argument("UniformBox: dim must be >= 1");
  for (double h : half_widths)
    if (!(h > 0.0)) throw std::invalid_argument("UniformBox: half-widths must be positive");
  const std::size_t d = half_widths.size();
  return CharFnModel(UniformBoxModel{std::move(half_widths)}, d);
}

CharFnModel CharFnModel::mixture(std::vector<double> weights, std::vector<CharFnModel> components) {
  if (weights.empty() || weights.size() != components.size())
    throw std::invalid_argument("Mixture: one weight per component required");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0.0; }) || std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("Mixture: weights must be nonnegative and sum to 1");
  const std::size_t d = components.front().dim();
  MixtureModel m;
  m.weights = std::move(weights);
  for (auto& c : components) {
    if (c.dim() != d) throw std::invalid_argument("Mixture: component dimension mismatch");
    m.components.push_back(std::make_shared<const CharFnModel>(std::move(c)));
  }
  return CharFnModel(std::move(m), d);
}

std::string CharFnModel::kind() const {
  return std::visit(overloaded{
                        [](const GaussianModel&) { return std::string("gaussian"); },
                        [](const SymStableModel&) { return std::string("sym_stable"); },
                        [](const WordProductModel&) { return std::string("word_product"); },
                        [](const EmpiricalModel&) { return std::string("empirical"); },
                        [](const UniformBoxModel&) { return std::string("uniform_box"); },
                        [](const MixtureModel&) { return std::string("mixture"); },
                    },
                    model_);
}

std::complex<double> CharFnModel::operator()(std::span<const double> v) const {
  if (v.size() != dim_) throw std::invalid_argument("eval_cf: dimension mismatch");
  return std::visit(
      overloaded{
          [&](const GaussianModel& g) -> std::complex<double> {
            double q = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
              double row = 0.0;
              for (std::size_t j = 0; j < dim_; ++j) row += g.form(i, j) * v[j];
              q += row * v[i];
            }
            return {std::exp(-q), 0.0};
          },
          [&](const SymStableModel& s) -> std::complex<double> {
            const double r = std::sqrt(norm2(v));
            return {std::exp(-std::pow(s.scale * r, s.alpha)), 0.0};
          },
          [&](const WordProductModel& w) -> std::complex<double> {
            std::complex<double> acc(1.0, 0.0);
            for (const auto& a : w.words) acc *= (*w.base)(adjoint_apply(a, v));
            return acc;
          },
          [&](const EmpiricalModel& e) -> std::complex<double> {
            double re = 0.0, im = 0.0;
            for (const auto& x : e.samples) {
              double phase = 0.0;
              for (std::size_t i = 0; i < dim_; ++i) phase += v[i] * x[i];
              re += std::cos(phase);
              im += std::sin(phase);
            }
            const double n = static_cast<double>(e.samples.size());
            return {re / n, im / n};
          },
          [&](const UniformBoxModel& u) -> std::complex<double> {
            double acc = 1.0;
            for (std::size_t i = 0; i < dim_; ++i) acc *= sinc(u.half_widths[i] * v[i]);
            return {acc, 0.0};
          },
          [&](const MixtureModel& m) -> std::complex<double> {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t i = 0; i < m.weights.size(); ++i) acc += m.weights[i] * (*m.components[i])(v);
            return acc;
          },
      },
      model_);
}

std::complex<double> eval_cf(const CharFnModel& model, std::span<const double> v) { return model(v); }

// ---------------------------------------------------------------------------

GridSpec GridSpec::default_for(std::size_t dim) {
  return GridSpec{dim, 20.0, dim == 1 ? std::size_t{512} : std::size_t{128}};
}

std::size_t GridSpec::total_points() const {
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) {
    if (total > kMaxLatticePoints / points) return kMaxLatticePoints + 1;
    total *= points;
  }
  return total;
}

void GridSpec::validate() const {
  if (dim == 0) throw std::invalid_argument("grid: dim must be >= 1");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw std::invalid_argument("grid: half-width must be positive");
  if (points < 2 || points % 2 != 0) throw std::invalid_argument("grid: points per axis must be even and >= 2");
  if (total_points() > kMaxLatticePoints) throw std::invalid_argument("grid: points^dim exceeds the memory budget");
}

void for_each_lattice_point(const GridSpec& grid, const std::function<void(const Vector&)>& visit) {
  grid.validate();
  const double h = grid.spacing();
  std::vector<std::size_t> idx(grid.dim, 0);
  Vector v(grid.dim, -grid.half_width);
  const std::size_t total = grid.total_points();
  for (std::size_t n = 0; n < total; ++n) {
    visit(v);
    for (std::size_t k = grid.dim; k-- > 0;) {
      if (++idx[k] < grid.points) {
        v[k] = -grid.half_width + h * static_cast<double>(idx[k]);
        break;
      }
      idx[k] = 0;
      v[k] = -grid.half_width;
    }
  }
}

std::size_t EvaluationSet::dim() const { return points_.empty() ? grid_.dim : points_.front().size(); }

void EvaluationSet::for_each(const std::function<void(const Vector&)>& visit) const {
  if (points_.empty()) {
    for_each_lattice_point(grid_, visit);
    return;
  }
  for (const auto& p : points_) visit(p);
}

ResidualReport autophage_residual(const CharFnModel& model, const LinearMap& t, const LinearMap& s,
                                  const EvaluationSet& set) {
  if (t.dim() != model.dim() || s.dim() != model.dim() || set.dim() != model.dim())
    throw std::invalid_argument("autophage_residual: dimension mismatch");
  ResidualReport report;
  set.for_each([&](const Vector& v) {
    const auto lhs = model(v);
    const auto rhs = model(adjoint_apply(t, v)) * model(adjoint_apply(s, v));
    const double r = std::abs(lhs - rhs);
    ++report.points;
    if (r > report.max_residual || report.worst_point.empty()) {
      report.max_residual = std::max(report.max_residual, r);
      report.worst_point = v;
    }
  });
  return report;
}

SemistableReport semistable_residual(const CharFnModel& model, const LinearMap& t, unsigned n,
                                     const EvaluationSet& set) {
  if (n < 2) throw std::invalid_argument("semistable_residual: n must be >= 2");
  if (t.dim() != model.dim() || set.dim() != model.dim())
    throw std::invalid_argument("semistable_residual: dimension mismatch");
  SemistableReport report;
  set.for_each([&](const Vector& v) {
    const auto base = model(adjoint_apply(t, v));
    std::complex<double> pw(1.0, 0.0);
    for (unsigned i = 0; i < n; ++i) pw *= base;
    const double r = std::abs(model(v) - pw);
    if (r > report.max_residual || report.worst_point.empty()) {
      report.max_residual = std::max(report.max_residual, r);
      report.worst_point = v;
    }
  });
  report.autophage_with_s_equal_t = n == 2 && report.max_residual <= 1e-10 && spectral_radius(t) < 1.0;
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// Pattern search for a zero of 1 - |phi|^2 while keeping |v| >= floor.
struct Refined {
  Vector v;
  double deficit;
};

Refined refine_candidate(const CharFnModel& model, Vector v, double floor, double target) {
  const std::size_t d = v.size();
  auto deficit = [&](const Vector& x) { return 1.0 - std::norm(model(x)); };
  auto project = [&](Vector& x) {
    const double r = std::sqrt(norm2(x));
    if (r < floor && r > 0.0)
      for (double& c : x) c *= floor / r;
  };
  double best = deficit(v);
  double step = 0.5 * floor;
  int evals = 0;
  constexpr int kMaxEvals = 40000;
  while (step > 1e-13 * floor && best > target && evals < kMaxEvals) {
    bool improved = false;
    for (std::size_t k = 0; k < d && !improved; ++k) {
      for (double sign : {1.0, -1.0}) {
        Vector trial = v;
        trial[k] += sign * step;
        project(trial);
        const double f = deficit(trial);
        ++evals;
        if (f < best) {
          best = f;
          v = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {std::move(v), best};
}

}  // namespace

FullnessVerdict fullness_check(const CharFnModel& model, const EvaluationSet& set, double tol) {
  if (set.dim() != model.dim()) throw std::invalid_argument("fullness_check: dimension mismatch");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("fullness_check: tol must lie in (0,1)");
  FullnessVerdict verdict;
  const double threshold = 1.0 - tol;

  struct Candidate {
    double modulus;
    Vector v;
  };
  constexpr std::size_t kCandidates = 8;
  std::vector<Candidate> best;

  set.for_each([&](const Vector& v) {
    const double r2 = norm2(v);
    if (r2 == 0.0) return;
    ++verdict.points_checked;
    const double mod = std::abs(model(v));
    if (mod >= threshold) {
      ++verdict.flagged_points;
      if (!verdict.witness_found) {
        verdict.witness_found = true;
        verdict.witness = v;
        verdict.modulus = mod;
      }
      return;
    }
    if (verdict.witness_found) return;
    if (best.size() < kCandidates || mod > best.back().modulus) {
      best.push_back({mod, v});
      std::sort(best.begin(), best.end(), [](const Candidate& a, const Candidate& b) { return a.modulus > b.modulus; });
      if (best.size() > kCandidates) best.pop_back();
    }
  });
  if (verdict.witness_found) return verdict;

  const double target = 1.0 - threshold * threshold;
  for (const auto& c : best) {
    verdict.modulus = std::max(verdict.modulus, c.modulus);
    const auto refined = refine_candidate(model, c.v, std::sqrt(norm2(c.v)), 0.5 * target);
    const double mod = std::abs(model(refined.v));
    verdict.modulus = std::max(verdict.modulus, mod);
    if (mod >= threshold) {
      verdict.witness_found = true;
      verdict.witness = refined.v;
      verdict.modulus = mod;
      break;
    }
  }
  return verdict;
}

double atom_mass_estimate(const CharFnModel& model, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("atom_mass_estimate: R must be positive");
  if (model.dim() == 1) {
    const double width = std::max(0.25, 2.0 * radius / 200000.0);
    const auto panels = static_cast<std::size_t>(std::ceil(2.0 * radius / width));
    const double h = 2.0 * radius / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
      const double a = -radius + h * static_cast<double>(i);
      total += boost::math::quadrature::gauss<double, 10>::integrate(
          [&](double v) { return std::norm(model({v})); }, a, a + h);
    }
    return total / (2.0 * radius);
  }
  const auto pts = qmc::ball_points(std::size_t{1} << 15, model.dim(), radius);
  double total = 0.0;
  for (const auto& p : pts) total += std::norm(model(p));
  return total / static_cast<double>(pts.size());
}

}  // namespace autophage
