#include "copolab/cli.hpp"

#include "builders.hpp"
#include "copolab/json_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace copolab;
using copolab::testing::so_diag_rep;
using copolab::testing::su2_pair;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "copolab_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_json(const std::string& name, const nlohmann::json& j) {
  const fs::path path = scratch_dir() / name;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  return path;
}

fs::path write_text(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig base_config(const std::string& command, const fs::path& input,
                      const std::string& out_name) {
  RunConfig config;
  config.command = command;
  config.input_path = input.string();
  config.output_path = (scratch_dir() / out_name).string();
  config.samples = 60;
  config.budget = 8;
  return config;
}

}  // namespace

TEST_CASE("copolarity pipeline on the two-copy action") {
  const fs::path input =
      write_json("so4_2copies.json", linear_rep_to_json(so_diag_rep(4, 2, true)));
  RunConfig config = base_config("copolarity", input, "so4_report.json");
  CHECK(run(config) == 0);

  const nlohmann::json report = nlohmann::json::parse(slurp(config.output_path));
  CHECK(report.at("results").at("copolarity") == 1);
  CHECK(report.at("results").at("weyl_dim") == 1);
  CHECK(report.at("results").at("section_dim") == 4);
  CHECK(report.at("results").at("dimension_identity_holds") == true);
  CHECK(report.at("pass") == true);
  CHECK(report.at("input_digest").get<std::string>().rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("trivial algebra gives copolarity zero on the whole space") {
  const fs::path input = write_json("trivial.json", linear_rep_to_json(LieRep(3, {})));
  RunConfig config = base_config("copolarity", input, "trivial_report.json");
  CHECK(run(config) == 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(config.output_path));
  CHECK(report.at("results").at("copolarity") == 0);
  CHECK(report.at("results").at("section_dim") == 3);
}

TEST_CASE("schema violations exit with the input-error code") {
  SUBCASE("generator length mismatch") {
    nlohmann::json j;
    j["kind"] = "linear_rep";
    j["ambient_dim"] = 2;
    j["generators"] = {{0.0, -1.0, 1.0}};  // 3 entries for a 2x2 matrix
    j["orthogonal"] = false;
    const fs::path input = write_json("bad_generator.json", j);
    RunConfig config = base_config("copolarity", input, "bad_report.json");
    CHECK(run(config) == 3);
  }
  SUBCASE("malformed JSON") {
    const fs::path input = write_text("not_json.json", "{ this is not json");
    RunConfig config = base_config("analyze", input, "bad2_report.json");
    CHECK(run(config) == 3);
  }
  SUBCASE("non-closed generators are surfaced as input errors") {
    nlohmann::json j;
    j["kind"] = "linear_rep";
    j["ambient_dim"] = 2;
    j["generators"] = {{0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}};
    j["orthogonal"] = false;
    const fs::path input = write_json("not_closed.json", j);
    RunConfig config = base_config("copolarity", input, "bad3_report.json");
    CHECK(run(config) == 3);
  }
  SUBCASE("missing input file") {
    RunConfig config = base_config("analyze", scratch_dir() / "missing.json", "bad4.json");
    CHECK(run(config) == 3);
  }
  SUBCASE("command and input kind must match") {
    const fs::path input = write_json("so3.json", linear_rep_to_json(
        LieRep(3, copolab::testing::so_generators(3), {}, true)));
    RunConfig config = base_config("sympair", input, "bad5.json");
    CHECK(run(config) == 3);
  }
}

TEST_CASE("check failures exit with code 2") {
  // Far beyond the conditioning horizon the Gram family's positivity is
  // numerically lost; the report must say so and the run must fail.
  const auto data = su2_pair();
  const fs::path input = write_json(
      "su2_horizon.json", sym_pair_to_json(data.sc, data.inner, data.sigma_inv, data.embedding));
  RunConfig config = base_config("gauge", input, "horizon_report.json");
  config.terms = 12;
  CHECK(run(config) == 2);
  const nlohmann::json report = nlohmann::json::parse(slurp(config.output_path));
  CHECK(report.at("pass") == false);
}

TEST_CASE("reports are deterministic byte streams") {
  const fs::path input = write_json("so3_det.json", linear_rep_to_json(
      LieRep(3, copolab::testing::so_generators(3), {}, true)));
  RunConfig config = base_config("copolarity", input, "det1.json");
  CHECK(run(config) == 0);
  const std::string first = slurp(config.output_path);

  config.output_path = (scratch_dir() / "det2.json").string();
  CHECK(run(config) == 0);
  CHECK(first == slurp(config.output_path));

  SUBCASE("reduction pipeline with component discovery is also deterministic") {
    const fs::path so4 = write_json("so4_det.json",
                                    linear_rep_to_json(so_diag_rep(4, 2, true)));
    RunConfig rconfig = base_config("reduce", so4, "rdet1.json");
    rconfig.samples = 40;
    CHECK(run(rconfig) == 0);
    const std::string a = slurp(rconfig.output_path);
    rconfig.output_path = (scratch_dir() / "rdet2.json").string();
    CHECK(run(rconfig) == 0);
    CHECK(a == slurp(rconfig.output_path));
  }
}

TEST_CASE("symmetric pair commands") {
  const auto data = su2_pair();
  const fs::path input = write_json(
      "su2.json", sym_pair_to_json(data.sc, data.inner, data.sigma_inv, data.embedding));

  SUBCASE("sympair") {
    RunConfig config = base_config("sympair", input, "su2_report.json");
    CHECK(run(config) == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(config.output_path));
    CHECK(report.at("results").at("k_dim") == 1);
    CHECK(report.at("results").at("p_dim") == 2);
    CHECK(report.at("results").at("p_bracket_dim") == 1);
  }
  SUBCASE("gauge") {
    RunConfig config = base_config("gauge", input, "su2_gauge.json");
    CHECK(run(config) == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(config.output_path));
    CHECK(report.at("results").at("branch") == "non_abelian");
    CHECK(report.at("results").at("min_eigenvalue").get<double>() > 1e-10);
  }
  SUBCASE("gauge on an abelian pair lands on the flat branch") {
    StructureConstants abelian;
    abelian.d = 2;
    abelian.table.assign(2, Matrix::Zero(2, 2));
    const fs::path flat = write_json(
        "flat_pair.json",
        sym_pair_to_json(abelian, Matrix::Identity(2, 2), Matrix(-Matrix::Identity(2, 2)), {}));
    RunConfig config = base_config("gauge", flat, "flat_gauge.json");
    CHECK(run(config) == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(config.output_path));
    CHECK(report.at("results").at("branch") == "hyperpolar");
  }
}

TEST_CASE("resolution commands") {
  SUBCASE("representation criteria") {
    const fs::path input = write_json("so3_res.json", linear_rep_to_json(
        LieRep(3, copolab::testing::so_generators(3), {}, true)));
    RunConfig config = base_config("resolution", input, "so3_res_report.json");
    config.samples = 50;
    CHECK(run(config) == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(config.output_path));
    CHECK(report.at("results").at("section_dim") == 1);
  }
  SUBCASE("invariant metric from a triple datum") {
    const StructureConstants sc =
        LieRep(3, copolab::testing::so_generators(3), {}, true).structure();
    const fs::path input = write_json("so3_triple.json", triple_datum_to_json(sc, {}, {0}));
    RunConfig config = base_config("resolution", input, "triple_report.json");
    CHECK(run(config) == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(config.output_path));
    CHECK(report.at("results").at("pd_found") == true);
  }
}

TEST_CASE("verify and slice and analyze smoke") {
  const fs::path so3 = write_json("so3_smoke.json", linear_rep_to_json(
      LieRep(3, copolab::testing::so_generators(3), {}, true)));
  SUBCASE("analyze") {
    RunConfig config = base_config("analyze", so3, "smoke_analyze.json");
    CHECK(run(config) == 0);
  }
  SUBCASE("verify") {
    RunConfig config = base_config("verify", so3, "smoke_verify.json");
    config.samples = 30;
    CHECK(run(config) == 0);
  }
  SUBCASE("slice") {
    RunConfig config = base_config("slice", so3, "smoke_slice.json");
    config.samples = 30;
    CHECK(run(config) == 0);
  }
  SUBCASE("reduce") {
    RunConfig config = base_config("reduce", so3, "smoke_reduce.json");
    config.samples = 40;
    CHECK(run(config) == 0);
  }
}
