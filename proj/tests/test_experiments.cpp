#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "doctest.h"
#include "experiments.hpp"

using namespace isopar;
using namespace isopar::exp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("git blob hash") {
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("experiment names round-trip") {
  for (auto e : {Experiment::Wmp, Experiment::Converge, Experiment::Geom, Experiment::Interp, Experiment::Matident,
                 Experiment::Flow})
    CHECK(parse_experiment(experiment_name(e)) == e);
  CHECK_THROWS_AS(parse_experiment("nope"), Error);
}

TEST_CASE("config validation and JSON") {
  ExperimentConfig c;
  c.experiment = Experiment::Geom;
  c.domain = "lens";
  c.degree = 3;
  c.hs = {0.3, 0.2, 0.1};
  c.blend = iso::Blend::GordonHall;
  const ExperimentConfig back = config_from_json(config_to_json(c));
  CHECK(back.experiment == Experiment::Geom);
  CHECK(back.domain == "lens");
  CHECK(back.degree == 3);
  CHECK(back.hs == c.hs);
  CHECK(back.blend == iso::Blend::GordonHall);
  CHECK(config_to_json(back) == config_to_json(c));

  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Ok;
  };
  CHECK(code_of([] { config_from_json(R"({"bogus": 1})"); }) == ErrorCode::Parse);
  CHECK(code_of([] { config_from_json("{"); }) == ErrorCode::Parse);
  CHECK(code_of([] { config_from_json(R"({"degree": "two"})"); }) == ErrorCode::Parse);

  ExperimentConfig bad = c;
  bad.hs = {0.1, 0.2, 0.05};
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::Contract);
  bad.hs = {0.2, 0.1};
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::Contract);
  bad = c;
  bad.degree = 4;
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::Contract);
  bad = c;
  bad.experiment = Experiment::Flow;
  bad.ts = {0.1};
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::Contract);
}

TEST_CASE("geom and matident experiments") {
  ExperimentConfig c;
  c.experiment = Experiment::Geom;
  c.degree = 2;
  c.hs = {0.4, 0.2, 0.1};
  const auto geom = run(c);
  REQUIRE(geom.table.rows.size() == 3);
  CHECK(geom.errors.empty());
  CHECK(geom.fit("phi_error").fit.slope > 2.5);
  CHECK(geom.value("interior_max") <= 1e-12);

  c.experiment = Experiment::Matident;
  c.domain = "lens";
  const auto mat = run(c);
  CHECK(mat.value("relative_difference_max") <= 1e-10);
  CHECK(mat.value("kernel_residual_max") <= 1e-11);
}

TEST_CASE("outputs and manifest") {
  ExperimentConfig c;
  c.experiment = Experiment::Interp;
  c.domain = "flower";
  c.hs = {0.3, 0.2, 0.1};
  const auto result = run(c);
  CHECK(result.fit("interp_error").fit.slope > 1.4);

  const auto dir = (std::filesystem::temp_directory_path() / "isopar_test_outputs").string();
  std::filesystem::remove_all(dir);
  const auto paths = write_outputs(result, dir);
  REQUIRE(paths.size() == 4);

  const std::string csv = slurp(dir + "/interp.csv");
  CHECK(csv.rfind("# schema isopar.interp.v1\nh_target,h,", 0) == 0);
  CHECK(csv == to_csv(result));

  const auto j = nlohmann::json::parse(slurp(dir + "/interp.json"));
  CHECK(j["rows"].size() == 3);
  CHECK(j["config"]["domain"] == "flower");

  const auto m = nlohmann::json::parse(slurp(dir + "/manifest.json"));
  CHECK(m["seed"] == 42);
  CHECK(m["outputs"]["interp.csv"] == git_blob_hash(csv));
  CHECK(m["outputs"]["interp.json"] == git_blob_hash(slurp(dir + "/interp.json")));
  CHECK(m["domain_text"].get<std::string>().find("name flower") == 0);
  std::filesystem::remove_all(dir);

  // Same config, same bytes: runtime only lives in the JSON.
  CHECK(to_csv(run(c)) == csv);
}

TEST_CASE("flow experiment") {
  ExperimentConfig c;
  c.experiment = Experiment::Flow;
  c.samples = 48;
  c.ts = {0.0, 0.025, 0.05};
  const auto result = run(c);
  REQUIRE(result.table.rows.size() == 3);
  CHECK(result.value("lambda") >= 0.9);
  CHECK(result.value("min_jacobian") > 0.0);
  CHECK(result.value("semigroup_defect") <= 1e-6);
}
