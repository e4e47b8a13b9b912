#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "shiftcurv/report.hpp"

using namespace shiftcurv;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "shiftcurv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

long lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("shiftcurv_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(invoke({"verify", "--grid", "64"}).code == cli::ok);
  CHECK(invoke({"verify", "--surface", "sphere:rho=1:d=0.3", "--check", "weighted", "--correction-factor", "0",
                "--grid", "64"})
            .code == cli::check_failed);
  const Run bad_k = invoke({"verify", "--n", "2", "--k", "7"});
  CHECK(bad_k.code == cli::usage);
  CHECK(bad_k.err.find("1..n=2") != std::string::npos);
  CHECK(invoke({"frobnicate"}).code == cli::usage);
  CHECK(invoke({"verify", "--format", "xml"}).code == cli::usage);
  CHECK(invoke({"verify", "--surface", "cube:side=1"}).code == cli::usage);
  CHECK(invoke({"verify", "--check", "hk", "--surface", "bump:rho=2:eps=-0.4:width=0.15"}).code == cli::usage);
  CHECK(invoke({"verify", "--grid", "32", "--out", "/proc/shiftcurv_forbidden"}).code == cli::numerical);
  const Run help = invoke({"--help"});
  CHECK(help.code == cli::ok);
  CHECK(help.out.find("verify") != std::string::npos);
}

TEST_CASE("csv output has one row per check") {
  const Run r = invoke({"verify", "--grid", "64", "--format", "csv"});
  REQUIRE(r.code == cli::ok);
  CHECK(r.out.rfind("check,lhs,rhs,abs_err,rel_err,tol,pass", 0) == 0);
  const Run j = invoke({"verify", "--grid", "64", "--format", "json"});
  const Json doc = Json::parse(j.out);
  CHECK(lines(r.out) == static_cast<long>(doc["checks"].size()) + 1);
  const Run sweep = invoke({"symfun-check", "--format", "csv", "--cases", "10"});
  CHECK(sweep.code == cli::ok);
  CHECK(lines(sweep.out) == 7);
}

TEST_CASE("json reports conform to the schema") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"verify", "--grid", "64"},
        {"surface-info", "--surface", "perturbed:rho=1:eps=0.1:mode=2", "--grid", "64"},
        {"theorem", "--name", "thm1.1i", "--surface", "sphere:rho=1:d=0.2", "--grid", "64"},
        {"audit", "--name", "thm1.3i", "--n", "3", "--grid", "64"},
        {"solve", "--expr", "Hs1", "--surface", "perturbed:rho=1:eps=0.1:mode=2", "--grid", "64"},
        {"symfun-check", "--lambda", "1,2,3"}}) {
    std::vector<std::string> a = args;
    a.insert(a.end(), {"--format", "json"});
    const Run r = invoke(a);
    INFO(args.front() << "\n" << r.err);
    CHECK(r.code == cli::ok);
    const Json doc = Json::parse(r.out);
    CHECK(doc["schema"] == report_schema_id);
    CHECK(doc["command"] == args.front());
    const auto problems = validate_report(doc);
    CHECK(problems.empty());
  }
}

TEST_CASE("profile of a centered sphere plots as a horizontal line") {
  const Run r = invoke({"surface-info", "--grid", "16", "--format", "svg"});
  REQUIRE(r.code == cli::ok);
  std::smatch m;
  REQUIRE(std::regex_search(r.out, m, std::regex("points=\"([^\"]*)\"")));
  std::set<std::string> ys;
  std::istringstream pts(m[1].str());
  std::string pt;
  int count = 0;
  while (pts >> pt) {
    ys.insert(pt.substr(pt.find(',') + 1));
    ++count;
  }
  CHECK(count == 16);
  CHECK(ys.size() == 1);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::string> args = {"ensemble", "--expr", "Hs1", "--members", "4", "--grid", "48", "--seed", "9",
                                         "--format", "csv"};
  const Run a = invoke(args);
  const Run b = invoke(args);
  CHECK(a.code == cli::ok);
  CHECK(a.out == b.out);
  CHECK(lines(a.out) == 5);
  const std::vector<std::string> v = {"verify", "--surface", "perturbed:rho=1:eps=0.1:mode=3", "--format", "json"};
  CHECK(invoke(v).out == invoke(v).out);
}

TEST_CASE("reports written under --out") {
  const auto dir = temp_dir("out");
  const Run r = invoke({"surface-info", "--grid", "32", "--format", "json", "--out", dir.string()});
  CHECK(r.code == cli::ok);
  CHECK(r.out.empty());
  CHECK(std::filesystem::exists(dir / "surface-info.json"));
  std::ifstream in(dir / "surface-info.json");
  CHECK(validate_report(Json::parse(in)).empty());
  const Run plots = invoke({"solve", "--expr", "Hs1", "--grid", "32", "--format", "svg", "--out", dir.string()});
  CHECK(plots.code == cli::ok);
  CHECK(std::filesystem::exists(dir / "solve_profile.svg"));
  CHECK(std::filesystem::exists(dir / "solve_history.svg"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("config files merge with flags") {
  const auto dir = temp_dir("config");
  const auto cfg = dir / "run.json";
  {
    std::ofstream f(cfg);
    f << R"({"surface": "sphere:rho=1.2:d=0.1", "grid": 48, "max_steps": 7, "check": ["minkowski", "volume"]})";
  }
  const cli::RunConfig parsed = cli::parse_config(
      6, std::vector<const char*>{"shiftcurv", "verify", "--config", cfg.c_str(), "--grid", "64"}.data());
  CHECK(parsed.surface == "sphere:rho=1.2:d=0.1");
  CHECK(parsed.grid == 64);
  CHECK(parsed.max_steps == 7);
  CHECK(parsed.check == std::vector<std::string>{"minkowski", "volume"});

  const Run r = invoke({"verify", "--config", cfg.string(), "--format", "csv"});
  CHECK(r.code == cli::ok);
  CHECK(lines(r.out) == 1 + 2 + 1);  // header, k = 1, 2, volume

  const auto bad = dir / "bad.json";
  {
    std::ofstream f(bad);
    f << R"({"surfce": "sphere:rho=1"})";
  }
  const Run rejected = invoke({"verify", "--config", bad.string()});
  CHECK(rejected.code == cli::usage);
  CHECK(rejected.err.find("surfce") != std::string::npos);
  CHECK(invoke({"verify", "--config", (dir / "missing.json").string()}).code == cli::usage);
  std::filesystem::remove_all(dir);
}

TEST_CASE("every config key is a flag") {
  const Run help = invoke({"--help"});
  for (const auto& key : cli::config_keys()) {
    INFO(key);
    if (key == "command") continue;  // positional
    CHECK(help.out.find("--" + key) != std::string::npos);
  }
}

TEST_CASE("theorem and audit verdicts") {
  const Run t = invoke({"theorem", "--name", "thm1.1i", "--surface", "perturbed:rho=1:eps=0.1:mode=2", "--grid",
                        "64", "--format", "json"});
  CHECK(t.code == cli::ok);
  const Json doc = Json::parse(t.out);
  bool consistency = false;
  for (const auto& c : doc["checks"])
    if (c["check"] == "rigidity_consistency") consistency = c["pass"].get<bool>();
  CHECK(consistency);
  CHECK(invoke({"audit", "--n", "3", "--grid", "64"}).code == cli::ok);
  CHECK(invoke({"audit", "--name", "thm4.2", "--surface", "sphere:rho=0.3"}).code == cli::usage);
}
