#pragma once

// JSON and CSV serialization for every artifact the CLI reads or writes.
// Doubles are written with 17 significant digits so files round-trip exactly.

#include "autophage/charfn.hpp"
#include "autophage/decay.hpp"
#include "autophage/density.hpp"
#include "autophage/error.hpp"
#include "autophage/gaussian.hpp"
#include "autophage/linops.hpp"
#include "autophage/padic.hpp"
#include "autophage/sampler.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace autophage::io {

using Json = nlohmann::json;

class IoError : public Error {
 public:
  using Error::Error;
};

std::string format_double(double x);

std::string read_text(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& json);

// Matrices: {"dim": d, "entries": [[...], ...]} (entries may also be flat
// row-major); a bare nested array or a bare number (1x1) is accepted on input.
Json matrix_to_json(const LinearMap& a);
LinearMap matrix_from_json(const Json& j);

// CSV: header line "dim,<d>", then d rows of d comma-separated values.
std::string matrix_to_csv(const LinearMap& a);
LinearMap matrix_from_csv(const std::string& text);

/// Dispatches on the extension (.json or .csv).
LinearMap read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const LinearMap& a);

// Models: {"kind": "gaussian" | "sym_stable" | "cauchy" | "empirical" |
// "uniform_box" | "mixture" | "word_product", ...}.
Json model_to_json(const CharFnModel& model);
CharFnModel model_from_json(const Json& j);

Json gaussian_spec_to_json(const GaussianSpec& spec);
GaussianSpec gaussian_spec_from_json(const Json& j);

Json decay_profile_to_json(const DecayProfile& profile);
std::string bound_report_csv(const BoundReport& report);

std::string density_csv(const GridDensity& gd);
Json density_metadata(const GridDensity& gd);

Json quotient_measure_to_json(const padic::QuotientMeasure& mu);
padic::QuotientMeasure quotient_measure_from_json(const Json& j);

std::string batch_csv(const SampleBatch& batch);

/// Frequency-lattice table: v coordinates, re, im, modulus.
std::string cf_grid_csv(const CharFnModel& model, const GridSpec& grid);

}  // namespace autophage::io
