#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "zerotwo/experiment.hpp"

using namespace zerotwo;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("zerotwo-tests-" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("example registry") {
  const auto& examples = example_configs();
  CHECK(examples.size() >= 7);
  for (const auto& ex : examples) {
    const std::string name = ex.name;
    CHECK(name.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789-") ==
          std::string::npos);
    // the embedded name matches the registry key
    json j = json::parse(ex.json);
    CHECK(j.at("name").get<std::string>() == name);
  }
}

TEST_CASE("every bundled example runs with exit 0") {
  fs::path dir = fresh_dir("examples");
  for (const auto& ex : example_configs()) {
    RunOptions opts;
    opts.out_dir = (dir / ex.name).string();
    RunOutcome out = run_config_string(ex.json, opts);
    INFO(ex.name, ": ", out.message);
    CHECK(out.exit_code == 0);
    CHECK_FALSE(out.result_json.empty());
    // a result json and at least one csv were produced
    CHECK(fs::exists(dir / ex.name / (std::string(ex.name) + ".json")));
    CHECK(fs::exists(dir / ex.name / (std::string(ex.name) + ".csv")));
  }
}

TEST_CASE("dichotomy run reproduces the depolarizing closed form") {
  fs::path dir = fresh_dir("dichotomy");
  RunOptions opts;
  opts.out_dir = dir.string();
  opts.plot = true;
  const char* cfg = R"({
    "name": "closed-form",
    "experiment": "dichotomy",
    "seed": 7,
    "algebra": {"blocks": [{"dim": 2}]},
    "channels": {"T": {"kind": "depolarizing", "p": 0.3}},
    "params": {"family": ["T"], "k": [1]},
    "schedule": {"n_max": 12},
    "eps": 0.001
  })";
  RunOutcome out = run_config_string(cfg, opts);
  CHECK(out.exit_code == 0);
  json doc = json::parse(out.result_json);
  CHECK(doc.at("tool_version").get<std::string>().find("zerotwo") == 0);
  for (const auto& s : doc.at("report").at("samples")) {
    const double n = s.at("n")[0].get<double>();
    const double expected = 0.3 * std::pow(0.7, n);
    CHECK(s.at("lower").get<double>() ==
          doctest::Approx(expected).epsilon(1e-6));
    CHECK(s.at("exact").get<bool>());
  }
  CHECK(fs::exists(dir / "closed-form.svg"));

  // csv has the documented header and one row per sample
  std::string csv = slurp(dir / "closed-form.csv");
  CHECK(csv.rfind("n_1,lower,upper,exact\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}

TEST_CASE("determinism: same config and seed give byte-identical csv") {
  fs::path a = fresh_dir("det-a");
  fs::path b = fresh_dir("det-b");
  const char* cfg = R"({
    "name": "det",
    "experiment": "dichotomy",
    "seed": 5,
    "algebra": {"blocks": [{"dim": 3}]},
    "channels": {"T": {"kind": "depolarizing", "p": 0.4}},
    "params": {"family": ["T"], "k": [1]},
    "schedule": {"n_max": 6},
    "eps": 0.001
  })";
  RunOptions oa, ob;
  oa.out_dir = a.string();
  ob.out_dir = b.string();
  CHECK(run_config_string(cfg, oa).exit_code == 0);
  CHECK(run_config_string(cfg, ob).exit_code == 0);
  CHECK(slurp(a / "det.csv") == slurp(b / "det.csv"));
}

TEST_CASE("schema violations exit 3 and name the field") {
  RunOptions opts;
  opts.write_files = false;

  SUBCASE("negative weight") {
    const char* cfg = R"({
      "name": "bad-weight",
      "experiment": "dichotomy",
      "algebra": {"blocks": [{"dim": 2, "weight": -1.0}]},
      "channels": {"T": {"kind": "identity"}},
      "params": {"family": ["T"], "k": [1]}
    })";
    RunOutcome out = run_config_string(cfg, opts);
    CHECK(out.exit_code == 3);
    CHECK(out.message.find("weight") != std::string::npos);
  }

  SUBCASE("unknown top-level key") {
    const char* cfg = R"({
      "name": "bad-key",
      "experiment": "dichotomy",
      "junk": 1,
      "algebra": {"blocks": [{"dim": 2}]},
      "params": {"family": ["T"], "k": [1]}
    })";
    RunOutcome out = run_config_string(cfg, opts);
    CHECK(out.exit_code == 3);
    CHECK(out.message.find("junk") != std::string::npos);
  }

  SUBCASE("unknown experiment kind") {
    const char* cfg = R"({
      "name": "bad-kind",
      "experiment": "frobnicate",
      "algebra": {"blocks": [{"dim": 2}]}
    })";
    RunOutcome out = run_config_string(cfg, opts);
    CHECK(out.exit_code == 3);
    CHECK(out.message.find("frobnicate") != std::string::npos);
  }

  SUBCASE("parse error reports the line") {
    RunOutcome out = run_config_string("{\n  \"name\": oops\n}", opts);
    CHECK(out.exit_code == 3);
    CHECK(out.message.find("line 2") != std::string::npos);
  }

  SUBCASE("unknown channel reference") {
    const char* cfg = R"({
      "name": "bad-ref",
      "experiment": "dichotomy",
      "algebra": {"blocks": [{"dim": 2}]},
      "params": {"family": ["nope"], "k": [1]}
    })";
    RunOutcome out = run_config_string(cfg, opts);
    CHECK(out.exit_code == 3);
    CHECK(out.message.find("nope") != std::string::npos);
  }
}

TEST_CASE("premise violations exit 2") {
  RunOptions opts;
  opts.write_files = false;
  // swap conjugation admits no dominated S: hypotheses must fail
  const char* cfg = R"({
    "name": "swap-theorem12",
    "experiment": "theorem12",
    "seed": 1,
    "algebra": {"blocks": [{"dim": 2}]},
    "channels": {
      "T": {
        "kind": "kraus",
        "operators": [[[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]]],
        "require_tp": true
      },
      "S": {"kind": "scale", "factor": 0.5, "channel": {"ref": "T"}}
    },
    "params": {"family": ["T"], "S": "S", "m": [1], "k": [1]},
    "eps": 0.5
  })";
  RunOutcome out = run_config_string(cfg, opts);
  CHECK(out.exit_code == 2);
  CHECK(out.verdict == "premise violated");
}

TEST_CASE("seed override changes the echoed seed") {
  RunOptions opts;
  opts.write_files = false;
  opts.seed_override = 42;
  const char* cfg = R"({
    "name": "seed-echo",
    "experiment": "gns",
    "seed": 1,
    "algebra": {"blocks": [{"dim": 2}]},
    "params": {"phi": [1.0]}
  })";
  RunOutcome out = run_config_string(cfg, opts);
  CHECK(out.exit_code == 0);
  json doc = json::parse(out.result_json);
  CHECK(doc.at("seed").get<int>() == 42);
  CHECK(doc.at("report").at("quotient_dim").get<int>() == 4);
}

TEST_CASE("norm experiment exports the representation matrix") {
  fs::path dir = fresh_dir("norm");
  RunOptions opts;
  opts.out_dir = dir.string();
  const char* cfg = R"({
    "name": "norm-check",
    "experiment": "norm",
    "seed": 1,
    "algebra": {"blocks": [{"dim": 2}]},
    "channels": {"T": {"kind": "depolarizing", "p": 0.25}},
    "params": {"channel": {"ref": "T"}}
  })";
  RunOutcome out = run_config_string(cfg, opts);
  CHECK(out.exit_code == 0);
  // depolarizing is diagonal in the Hermitian basis: 1, then 1 - p
  std::istringstream matrix(slurp(dir / "norm-check-matrix.csv"));
  std::string line;
  int row = 0;
  while (std::getline(matrix, line)) {
    std::istringstream cells(line);
    std::string cell;
    int col = 0;
    while (std::getline(cells, cell, ',')) {
      const double expected = row != col ? 0.0 : (row == 0 ? 1.0 : 0.75);
      CHECK(std::stod(cell) == doctest::Approx(expected).epsilon(1e-12));
      ++col;
    }
    CHECK(col == 4);
    ++row;
  }
  CHECK(row == 4);
  json doc = json::parse(out.result_json);
  CHECK(doc.at("report").at("norm_positive").get<double>() ==
        doctest::Approx(1.0));
}
