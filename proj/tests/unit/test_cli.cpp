#include "autophage/io.hpp"
#include "cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

using namespace autophage;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "autophage_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("decay exponent for t = s = 1/2") {
  const auto dir = fresh_dir("decay");
  const auto r = run({"decay", "--t", "0.5", "--s", "0.5", "--out-dir", dir.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("r = 1.0\n") != std::string::npos);
}

TEST_CASE("Cauchy density row at the origin") {
  const auto dir = fresh_dir("density");
  const auto r = run({"density", "--model", "cauchy", "--L", "40", "--N", "2048", "--out", "d.csv", "--out-dir",
                      dir.string()});
  REQUIRE(r.code == cli::kOk);
  std::istringstream csv(io::read_text(dir / "d.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "x,density");
  bool found = false;
  while (std::getline(csv, line)) {
    const auto comma = line.find(',');
    const double x = std::stod(line.substr(0, comma)), f = std::stod(line.substr(comma + 1));
    if (std::abs(x) < 1e-12) {
      found = true;
      CHECK(std::abs(f - 0.31831) <= 1e-4);
    }
  }
  CHECK(found);
  CHECK(fs::exists(dir / "d.json"));
}

TEST_CASE("verification outcomes map to exit codes") {
  const auto dir = fresh_dir("verify");
  const std::string d = dir.string();
  CHECK(run({"verify-autophage", "--model", "cauchy", "--T", "0.3", "--S", "0.7", "--out-dir", d}).code == cli::kOk);
  const auto bad = run({"verify-autophage", "--model", "cauchy", "--T", "0.3", "--S", "0.6", "--out-dir", d});
  CHECK(bad.code == cli::kVerificationFailure);
  CHECK(bad.out.find("FAIL") != std::string::npos);
  const auto report = io::read_json(dir / "autophage_report.json");
  CHECK(report["verified"] == false);

  CHECK(run({"gaussian-cofactor", "--P", "1", "--T", "0.6", "--out-dir", d}).code == cli::kOk);
  const auto spec = io::gaussian_spec_from_json(io::read_json(dir / "gaussian_spec.json"));
  CHECK(spec.s(0, 0) == doctest::Approx(0.8));

  // Cauchy at L = 2 leaves |phi| = e^-2 on the boundary.
  CHECK(run({"density", "--model", "cauchy", "--L", "2", "--N", "256", "--out-dir", d}).code ==
        cli::kVerificationFailure);
  CHECK(run({"padic-verify", "--p", "3", "--measure", "stable", "--out-dir", d}).code == cli::kVerificationFailure);
  CHECK(run({"padic-verify", "--p", "3", "--measure", "dirac", "--out-dir", d}).code == cli::kOk);
  // Haar(Z_p) is idempotent but p(Haar(Z_p)) = Haar(pZ_p), so the pair (p, p) fails.
  CHECK(run({"padic-verify", "--p", "3", "--measure", "haar", "--j", "0", "--out-dir", d}).code ==
        cli::kVerificationFailure);
}

TEST_CASE("usage errors exit 2") {
  const auto d = fresh_dir("usage").string();
  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"no-such-command"}).code == cli::kUsageError);
  CHECK(run({"decay", "--bogus", "1"}).code == cli::kUsageError);
  CHECK(run({"decay", "--t", "abc", "--s", "0.5"}).code == cli::kUsageError);
  CHECK(run({"density", "--model", "/nonexistent/model.json", "--out-dir", d}).code == cli::kUsageError);
  CHECK(run({"gaussian-cofactor", "--P", "1", "--T", "1.2", "--out-dir", d}).code == cli::kUsageError);
  CHECK(run({"padic-verify", "--p", "4", "--out-dir", d}).code == cli::kUsageError);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("config files") {
  const auto dir = fresh_dir("config");
  const auto cfg = dir / "cfg.json";
  io::write_text(cfg, R"({"t": 0.5, "s": 0.5, "model": "cauchy", "out": "from_config.csv"})");
  const auto a = run({"decay", "--config", cfg.string(), "--out-dir", dir.string()});
  CHECK(a.code == cli::kOk);
  CHECK(a.out.find("r = 1.0\n") != std::string::npos);
  CHECK(fs::exists(dir / "from_config.csv"));

  // Flags override config values wherever they appear.
  const auto b = run({"decay", "--s", "0.25", "--config", cfg.string(), "--t", "0.25", "--out-dir", dir.string()});
  CHECK(b.code == cli::kOk);
  CHECK(b.out.find("r = 0.5\n") != std::string::npos);

  io::write_text(cfg, R"({"t": 0.5, "typo": 1})");
  const auto c = run({"decay", "--config", cfg.string(), "--out-dir", dir.string()});
  CHECK(c.code == cli::kUsageError);
  CHECK(c.err.find("typo") != std::string::npos);

  io::write_text(cfg, R"([1, 2])");
  CHECK(run({"decay", "--config", cfg.string()}).code == cli::kUsageError);
}

TEST_CASE("output directory from the environment") {
  const auto dir = fresh_dir("env");
  ::setenv("AUTOPHAGE_OUT_DIR", dir.string().c_str(), 1);
  const auto r = run({"decay", "--t", "0.5", "--s", "0.5", "--model", "cauchy"});
  ::unsetenv("AUTOPHAGE_OUT_DIR");
  CHECK(r.code == cli::kOk);
  CHECK(fs::exists(dir / "decay_bound.csv"));
  CHECK(fs::exists(dir / "decay_profile.json"));
}

TEST_CASE("repeat runs are byte-identical") {
  const auto dir = fresh_dir("repeat");
  const std::vector<std::vector<std::string>> commands{
      {"sample", "--T", "0.6", "--S", "0.8", "--depth", "6", "--count", "500", "--rng-seed", "4"},
      {"density", "--model", "gaussian", "--L", "10", "--N", "256"},
      {"decay", "--T", "0.6", "--S", "0.8", "--model", "gaussian", "--rays", "8", "--radii", "8"},
      {"padic-verify", "--p", "2", "--m", "3", "--k", "4", "--measure", "haar", "--j", "1", "--dense"},
      {"infinitesimal", "--epsilon", "0.2", "--n-max", "10", "--count", "1000"},
  };
  for (auto cmd : commands) {
    cmd.insert(cmd.end(), {"--out-dir", dir.string()});
    const auto first = run(cmd);
    std::map<fs::path, std::string> contents;
    for (const auto& e : fs::directory_iterator(dir)) contents[e.path()] = io::read_text(e.path());
    const auto second = run(cmd);
    INFO(cmd.front());
    CHECK(first.code == second.code);
    CHECK(first.out == second.out);
    for (const auto& [path, text] : contents) CHECK(io::read_text(path) == text);
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
}
