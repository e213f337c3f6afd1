#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "acceptance.hpp"
#include "doctest.h"
#include "runner.hpp"

using namespace hyg;

namespace {

const ExperimentResult& find(const RunReport& r, const std::string& name) {
  for (const auto& e : r.experiments)
    if (e.name == name) return e;
  FAIL("missing experiment " << name);
  return r.experiments.front();
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::stringstream ss(csv);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

}  // namespace

TEST_CASE("spheres experiment matches the closed form") {
  const auto rep = run(parse_config("experiments:\n  - kind: spheres\n    r_max: 12\n"));
  REQUIRE(rep.experiments.size() == 1);
  const auto t = rows(rep.experiments[0].tables.at(0).text);
  REQUIRE(t.size() == 14);
  CHECK(t[0][1] == "sphere_size");
  long long expect = 4;
  for (int n = 1; n <= 12; ++n) {
    CHECK(t[static_cast<std::size_t>(n + 1)][1] == std::to_string(expect));
    expect *= 3;
  }
  CHECK(rep.exit_code() == 0);
  for (const auto& v : rep.verdicts) CHECK(v.status == VerdictStatus::kPass);
}

TEST_CASE("empty experiment list") {
  const auto rep = run(parse_config(""));
  CHECK(rep.experiments.empty());
  CHECK(rep.verdicts.empty());
  CHECK(rep.exit_code() == 0);
}

TEST_CASE("runs are deterministic for a fixed config") {
  const std::string text = R"(seed: 5
workers: 2
experiments:
  - {name: k, kind: kappa-ergodic, r_min: 6, r_max: 7, samples: 500}
  - {name: h, kind: horoshell, r_min: 4, r_max: 8, bases: 2, samples: 200}
  - {name: zs, kind: kappa-ergodic, group: "Z_2*Z_3", action: "cyclic:6:3,2", r_min: 5, r_max: 5, samples: 300}
  - {name: d, kind: domination, r_min: 6, r_max: 7, a: 14, samples: 500}
)";
  const auto a = run(parse_config(text));
  const auto b = run(parse_config(text));
  REQUIRE(a.experiments.size() == b.experiments.size());
  for (std::size_t i = 0; i < a.experiments.size(); ++i) {
    CHECK_MESSAGE(!a.experiments[i].error, a.experiments[i].name << ": " << a.experiments[i].error.value_or(""));
    REQUIRE(a.experiments[i].tables.size() == b.experiments[i].tables.size());
    for (std::size_t j = 0; j < a.experiments[i].tables.size(); ++j)
      CHECK(a.experiments[i].tables[j].text == b.experiments[i].tables[j].text);
  }
}

TEST_CASE("a failing experiment does not disturb its siblings") {
  const std::string alone = "experiments:\n  - {name: s, kind: spheres, r_max: 6}\n";
  const std::string mixed =
      "seed: 1\nexperiments:\n  - {name: bad, kind: horoshell, group: F_2xZ_3, r_max: 6}\n"
      "  - {name: s, kind: spheres, r_max: 6}\n  - {name: m, kind: maximal, action: circle}\n";
  const auto a = run(parse_config(alone));
  const auto b = run(parse_config(mixed));
  CHECK(find(b, "bad").error);
  CHECK(find(b, "bad").error_kind == "capability");
  CHECK(find(b, "m").error);
  CHECK_FALSE(find(b, "s").error);
  CHECK(find(b, "s").tables.at(0).text == find(a, "s").tables.at(0).text);
  CHECK(b.exit_code() == 1);
}

TEST_CASE("declared thresholds turn into verdicts") {
  const auto rep = run(parse_config(R"(experiments:
  - {name: z3, kind: average, action: "cyclic:3:1,0", family: mu, r_max: 14, theta: 0.5, observables: [[1, 0, -1]]}
  - {name: par, kind: average, action: parity, family: sigma, r_max: 14, theta: 0.5}
  - {name: mx, kind: maximal, action: parity, r_max: 6, bound: 0.5}
)"));
  REQUIRE(rep.verdicts.size() == 3);
  CHECK(rep.verdicts[0].id == "average.convergence");
  CHECK(rep.verdicts[0].status == VerdictStatus::kPass);
  CHECK(rep.verdicts[1].experiment == "par");
  CHECK(rep.verdicts[1].status == VerdictStatus::kFail);  // sigma_n f = (-1)^n never settles
  CHECK(rep.verdicts[2].id == "maximal.norm-bound");
  CHECK(rep.verdicts[2].status == VerdictStatus::kFail);
  CHECK(rep.exit_code() == 1);
}

TEST_CASE("report serialisation and files") {
  const auto rep = run(parse_config("experiments:\n  - {name: s, kind: spheres, r_max: 4}\n  - {name: q, kind: measure, r_max: 2, depth: 4}\n"));
  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j["versions"].contains("horoshell"));
  CHECK(j["verdicts"][0]["id"] == "spheres.bfs-agreement");
  CHECK(j["exit_code"] == 0);
  CHECK(j["experiments"][1]["tables"][1] == "q-cylinders.csv");
  const auto dir = std::filesystem::temp_directory_path() / "hyg_runner_test";
  std::filesystem::remove_all(dir);
  rep.write(dir.string());
  CHECK(std::filesystem::exists(dir / "s.csv"));
  CHECK(std::filesystem::exists(dir / "q-cylinders.csv"));
  CHECK(std::filesystem::exists(dir / "report.json"));
  std::ifstream in(dir / "s.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == rep.experiments[0].tables[0].text);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify skips criteria above the cap") {
  VerifyOptions o;
  o.cap = 5;
  o.only = {"AC1", "AC3", "AC5", "AC8b"};
  const auto rep = verify(o);
  REQUIRE(rep.verdicts.size() == 4);
  CHECK(rep.verdicts[0].status == VerdictStatus::kSkipped);
  CHECK(rep.verdicts[1].status == VerdictStatus::kPass);
  CHECK(rep.verdicts[2].status == VerdictStatus::kPass);
  CHECK(rep.verdicts[3].status == VerdictStatus::kSkipped);
  CHECK(rep.exit_code() == 0);
  o.cap = 0;
  o.only.clear();
  for (const auto& v : verify(o).verdicts) CHECK(v.status == VerdictStatus::kSkipped);
}

TEST_CASE("Monte Carlo criteria hold under another seed") {
  VerifyOptions o;
  o.seed = 12345;
  o.only = {"AC5", "AC7"};
  for (const auto& v : verify(o).verdicts) CHECK_MESSAGE(v.status == VerdictStatus::kPass, v.detail);
}
