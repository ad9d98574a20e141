#include "autophage/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace autophage::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw IoError(std::string("field '") + what + "' must be a number");
  return j.get<double>();
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw IoError(std::string("field '") + what + "' must be an array");
  Vector out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw IoError("not a number: '" + s + "'");
  }
  while (used < s.size() && (s[used] == ' ' || s[used] == '\r')) ++used;
  if (used != s.size()) throw IoError("not a number: '" + s + "'");
  return x;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw IoError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& json) { write_text(path, json.dump(2) + "\n"); }

// ---------------------------------------------------------------------------

Json matrix_to_json(const LinearMap& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", a.dim()}, {"entries", std::move(rows)}};
}

LinearMap matrix_from_json(const Json& j) {
  if (j.is_number()) return LinearMap::scalar(1, j.get<double>());
  const Json& entries = j.is_object() ? field(j, "entries") : j;
  if (!entries.is_array() || entries.empty()) throw IoError("matrix entries must be a non-empty array");

  std::vector<double> flat;
  std::size_t dim = 0;
  if (entries.front().is_array()) {
    dim = entries.size();
    for (const auto& row : entries) {
      if (!row.is_array() || row.size() != dim) throw IoError("matrix must be square");
      for (const auto& x : row) flat.push_back(number(x, "entries"));
    }
  } else {
    flat = vector_from_json(entries, "entries");
    while (dim * dim < flat.size()) ++dim;
    if (dim * dim != flat.size()) throw IoError("flat matrix entries must have d*d values");
  }
  if (j.is_object() && j.contains("dim") && number(j.at("dim"), "dim") != static_cast<double>(dim))
    throw IoError("matrix 'dim' does not match its entries");
  return LinearMap(dim, std::move(flat));
}

std::string matrix_to_csv(const LinearMap& a) {
  std::string out = "dim," + std::to_string(a.dim()) + "\n";
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (j) out += ',';
      out += format_double(a(i, j));
    }
    out += '\n';
  }
  return out;
}

LinearMap matrix_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty matrix CSV");
  const auto header = split(line, ',');
  if (header.size() != 2 || header[0] != "dim") throw IoError("matrix CSV must start with 'dim,<d>'");
  const double d = parse_double(header[1]);
  if (!(d >= 1.0) || d != static_cast<double>(static_cast<std::size_t>(d))) throw IoError("matrix CSV: bad dim");
  const auto dim = static_cast<std::size_t>(d);
  std::vector<double> flat;
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::getline(in, line)) throw IoError("matrix CSV: too few rows");
    const auto cells = split(line, ',');
    if (cells.size() != dim) throw IoError("matrix CSV: row " + std::to_string(i) + " has wrong length");
    for (const auto& c : cells) flat.push_back(parse_double(c));
  }
  return LinearMap(dim, std::move(flat));
}

LinearMap read_matrix(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return matrix_from_csv(read_text(path));
  if (ext == ".json") return matrix_from_json(read_json(path));
  throw IoError("unknown matrix file extension '" + ext + "' (expected .json or .csv)");
}

void write_matrix(const std::filesystem::path& path, const LinearMap& a) {
  if (path.extension() == ".csv")
    write_text(path, matrix_to_csv(a));
  else
    write_json(path, matrix_to_json(a));
}

// ---------------------------------------------------------------------------

Json model_to_json(const CharFnModel& model) {
  return std::visit(
      overloaded{
          [](const GaussianModel& g) { return Json{{"kind", "gaussian"}, {"P", matrix_to_json(g.form)}}; },
          [](const SymStableModel& s) {
            return Json{{"kind", "sym_stable"}, {"alpha", s.alpha}, {"scale", s.scale}, {"dim", s.dim}};
          },
          [](const WordProductModel& w) {
            Json words = Json::array();
            for (const auto& a : w.words) words.push_back(matrix_to_json(a));
            return Json{{"kind", "word_product"}, {"base", model_to_json(*w.base)}, {"words", std::move(words)}};
          },
          [](const EmpiricalModel& e) { return Json{{"kind", "empirical"}, {"samples", e.samples}}; },
          [](const UniformBoxModel& u) { return Json{{"kind", "uniform_box"}, {"half_widths", u.half_widths}}; },
          [](const MixtureModel& m) {
            Json comps = Json::array();
            for (const auto& c : m.components) comps.push_back(model_to_json(*c));
            return Json{{"kind", "mixture"}, {"weights", m.weights}, {"components", std::move(comps)}};
          },
      },
      model.variant());
}

CharFnModel model_from_json(const Json& j) {
  const Json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) throw IoError("field 'kind' must be a string");
  const auto kind = kind_field.get<std::string>();
  auto dim_or_one = [&] {
    if (!j.contains("dim")) return std::size_t{1};
    const double d = number(j.at("dim"), "dim");
    if (!(d >= 1.0)) throw IoError("field 'dim' must be >= 1");
    return static_cast<std::size_t>(d);
  };

  if (kind == "gaussian") return CharFnModel::gaussian(matrix_from_json(field(j, "P")));
  if (kind == "cauchy") return CharFnModel::cauchy(dim_or_one());
  if (kind == "sym_stable")
    return CharFnModel::sym_stable(number(field(j, "alpha"), "alpha"),
                                   j.contains("scale") ? number(j.at("scale"), "scale") : 1.0, dim_or_one());
  if (kind == "empirical") {
    const Json& s = field(j, "samples");
    if (!s.is_array()) throw IoError("field 'samples' must be an array");
    std::vector<Vector> samples;
    for (const auto& x : s) samples.push_back(vector_from_json(x, "samples"));
    return CharFnModel::empirical(std::move(samples));
  }
  if (kind == "uniform_box") return CharFnModel::uniform_box(vector_from_json(field(j, "half_widths"), "half_widths"));
  if (kind == "mixture") {
    const Json& c = field(j, "components");
    if (!c.is_array()) throw IoError("field 'components' must be an array");
    std::vector<CharFnModel> comps;
    for (const auto& x : c) comps.push_back(model_from_json(x));
    return CharFnModel::mixture(vector_from_json(field(j, "weights"), "weights"), std::move(comps));
  }
  if (kind == "word_product") {
    const Json& w = field(j, "words");
    if (!w.is_array()) throw IoError("field 'words' must be an array");
    std::vector<LinearMap> words;
    for (const auto& x : w) words.push_back(matrix_from_json(x));
    return CharFnModel::word_product(model_from_json(field(j, "base")), std::move(words));
  }
  throw IoError("unknown model kind '" + kind + "'");
}

Json gaussian_spec_to_json(const GaussianSpec& spec) {
  return Json{{"P", matrix_to_json(spec.form)}, {"T", matrix_to_json(spec.t)}, {"S", matrix_to_json(spec.s)}};
}

GaussianSpec gaussian_spec_from_json(const Json& j) {
  return GaussianSpec{matrix_from_json(field(j, "P")), matrix_from_json(field(j, "T")),
                      matrix_from_json(field(j, "S"))};
}

Json decay_profile_to_json(const DecayProfile& profile) {
  return Json{{"factors", profile.factors},   {"r", profile.r},
              {"c", profile.c},               {"sampled", profile.sampled},
              {"argmin", profile.argmin},     {"inner_radius", profile.inner_radius()},
              {"annulus_samples", profile.annulus_samples.size()}};
}

std::string bound_report_csv(const BoundReport& report) {
  std::string out = "ray,radius,modulus,bound,margin\n";
  for (const auto& row : report.rows)
    out += std::to_string(row.ray) + ',' + format_double(row.radius) + ',' + format_double(row.modulus) + ',' +
           format_double(row.bound) + ',' + format_double(row.margin) + '\n';
  return out;
}

std::string density_csv(const GridDensity& gd) {
  std::string out;
  for (std::size_t k = 0; k < gd.dim; ++k) out += gd.dim == 1 ? "x," : "x" + std::to_string(k + 1) + ',';
  out += "density\n";
  std::vector<std::size_t> idx(gd.dim, 0);
  for (double value : gd.values) {
    for (std::size_t k = 0; k < gd.dim; ++k) out += format_double(gd.coordinate(idx[k])) + ',';
    out += format_double(value) + '\n';
    for (std::size_t k = gd.dim; k-- > 0;) {
      if (++idx[k] < gd.points) break;
      idx[k] = 0;
    }
  }
  return out;
}

Json density_metadata(const GridDensity& gd) {
  return Json{{"dim", gd.dim},
              {"points", gd.points},
              {"spacing", gd.spacing},
              {"origin", gd.origin},
              {"frequency_half_width", gd.frequency_grid.half_width},
              {"frequency_points", gd.frequency_grid.points},
              {"oversample", gd.oversample},
              {"sup", gd.sup_value},
              {"min", gd.min_value},
              {"mass", gd.total_mass},
              {"max_imaginary", gd.max_imaginary},
              {"boundary_modulus", gd.boundary_modulus}};
}

Json quotient_measure_to_json(const padic::QuotientMeasure& mu) {
  const auto& q = mu.quotient();
  const auto w = mu.weights();
  return Json{{"p", q.p()}, {"m", q.m()}, {"k", q.k()}, {"weights", std::vector<double>(w.begin(), w.end())}};
}

padic::QuotientMeasure quotient_measure_from_json(const Json& j) {
  auto uint_field = [&](const char* key) {
    const double x = number(field(j, key), key);
    if (x < 0.0 || x != static_cast<double>(static_cast<unsigned>(x)))
      throw IoError(std::string("field '") + key + "' must be a nonnegative integer");
    return static_cast<unsigned>(x);
  };
  padic::Quotient q(uint_field("p"), uint_field("m"), uint_field("k"));
  return padic::QuotientMeasure(q, vector_from_json(field(j, "weights"), "weights"));
}

std::string batch_csv(const SampleBatch& batch) {
  std::string out;
  const std::size_t d = batch.points.empty() ? 0 : batch.points.front().size();
  for (std::size_t k = 0; k < d; ++k) {
    if (k) out += ',';
    out += "x" + std::to_string(k + 1);
  }
  out += '\n';
  for (const auto& x : batch.points) {
    for (std::size_t k = 0; k < d; ++k) {
      if (k) out += ',';
      out += format_double(x[k]);
    }
    out += '\n';
  }
  return out;
}

std::string cf_grid_csv(const CharFnModel& model, const GridSpec& grid) {
  grid.validate();
  std::string out;
  for (std::size_t k = 0; k < grid.dim; ++k) out += "v" + std::to_string(k + 1) + ',';
  out += "re,im,modulus\n";
  for_each_lattice_point(grid, [&](const Vector& v) {
    const auto phi = model(v);
    for (double x : v) out += format_double(x) + ',';
    out += format_double(phi.real()) + ',' + format_double(phi.imag()) + ',' + format_double(std::abs(phi)) + '\n';
  });
  return out;
}

}  // namespace autophage::io
