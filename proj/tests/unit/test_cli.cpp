#include <doctest.h>

#include "dqm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dqm;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dqm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "dqm_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"nonsense"}).code == cli::kUsageError);
  CHECK(run({"reproduce", "figures"}).code == cli::kUsageError);
  CHECK(run({"--q", "1.5", "reproduce", "peaks"}).code == cli::kUsageError);
  CHECK(run({"--help"}).code == cli::kPass);
}

TEST_CASE("verify-algebra passes and catches an injected fault") {
  auto ok = run({"verify-algebra"});
  CHECK(ok.code == cli::kPass);
  auto j = nlohmann::json::parse(ok.out);
  CHECK(j["pass"] == true);
  CHECK(j["checks"].size() > 20);
  for (const auto& c : j["checks"]) CHECK(c["residual_terms"] == 0);

  auto bad = run({"verify-algebra", "--fault", "gamma-alpha", "--format", "csv"});
  CHECK(bad.code == cli::kCheckFailure);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("eigenstates") {
  auto r = run({"--q", "0.9", "--truncation", "80", "eigenstates", "--n-max", "5", "--mu", "1", "2"});
  CHECK(r.code == cli::kPass);
  CHECK(nlohmann::json::parse(r.out)["checks"].size() == 1 + 12 + 2);
}

TEST_CASE("semiclassical") {
  auto r = run({"semiclassical", "--theta", "1.5707963267948966"});
  REQUIRE(r.code == cli::kPass);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["mu"] == 7.0);
  CHECK(j["peak_level"] == 34);
  CHECK(run({"semiclassical"}).code == cli::kUsageError);
  CHECK(run({"semiclassical", "--mu", "3", "--theta", "1"}).code == cli::kUsageError);
}

TEST_CASE("spectrum") {
  auto r = run({"spectrum", "--spin", "0", "0", "--sg", "1.5707963267948966", "0", "--levels", "80"});
  REQUIRE(r.code == cli::kPass);
  auto j = nlohmann::json::parse(r.out);
  CHECK(double(j["p0"]) == doctest::Approx(double(j["moments"]["p0"])).epsilon(1e-6));
  auto csv = run({"spectrum", "--format", "csv", "--levels", "60"});
  CHECK(csv.out.rfind("p,weight\n", 0) == 0);
}

TEST_CASE("protocol config errors name the field") {
  auto cfg = scratch("bad.json");
  {
    std::ofstream(cfg) << R"({"rotation": {"theta": 4.0}})";
  }
  auto r = run({"protocol", cfg.string()});
  CHECK(r.code == cli::kUsageError);
  CHECK(r.err.find("/rotation/theta") != std::string::npos);
  {
    std::ofstream(cfg) << "{not json";
  }
  CHECK(run({"protocol", cfg.string()}).code == cli::kUsageError);
  CHECK(run({"protocol", scratch("missing.json").string()}).code == cli::kUsageError);
}

TEST_CASE("protocol output is deterministic and atomic") {
  auto cfg = scratch("mc.json");
  {
    std::ofstream(cfg) << R"({"q": 0.99, "N": 200, "trials": 500, "seed": 17, "mode": "monte_carlo",
                             "rotation": {"theta": 3.141592653589793}, "spectral_truncation": 40})";
  }
  auto out1 = scratch("run1.json");
  CHECK(run({"--out", out1.string(), "protocol", cfg.string()}).code == cli::kPass);
  const std::string first = slurp(out1);
  const std::string first_hist = slurp(scratch("run1_hist_y_q_x_q.csv"));
  CHECK(run({"--out", out1.string(), "protocol", cfg.string()}).code == cli::kPass);
  CHECK(slurp(out1) == first);
  CHECK(slurp(scratch("run1_hist_y_q_x_q.csv")) == first_hist);
  auto j = nlohmann::json::parse(slurp(out1));
  CHECK(j["config"]["seed"] == 17);
  const std::string ref = j["per_cell"]["x_q,z_q"]["histogram_ref"];
  CHECK(std::filesystem::exists(out1.parent_path() / ref));
  CHECK(slurp(out1.parent_path() / ref).rfind("p,weight\n", 0) == 0);
  for (const auto& e : std::filesystem::directory_iterator(out1.parent_path()))
    CHECK(e.path().string().find(".tmp.") == std::string::npos);

  auto seeded = run({"--seed", "18", "--format", "csv", "protocol", cfg.string()});
  CHECK(seeded.code == cli::kPass);
  CHECK(seeded.out.rfind("row,col,mean,uncertainty", 0) == 0);
}

TEST_CASE("reproduce peaks reports the mu = 17 anchor") {
  auto r = run({"--format", "csv", "reproduce", "peaks"});
  CHECK(r.out.find("\"argmax mu=7\",34,34,0,PASS") != std::string::npos);
  // the mu = 17 distribution peaks one level below the quoted anchor
  CHECK(r.out.find("\"argmax mu=17\",95,96,0,FAIL") != std::string::npos);
  CHECK(r.code == cli::kCheckFailure);
}
