#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "halfder/cli.hpp"

using namespace halfder;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "halfder");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::filesystem::path temp_path(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("solve reports per-shift dimensions") {
  const Run r = invoke({"solve", "--algebra", "virasoro-generic", "--q", "2", "--window", "5", "--interior", "2",
                        "--shifts", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["tool"] == "halfder");
  CHECK(j["config"]["algebra"]["q"] == "2");
  CHECK(j["config"]["interior"] == 2);
  CHECK(j["results"]["shifts"].size() == 25);
  for (const auto& s : j["results"]["shifts"]) {
    const bool origin = s["shift"] == nlohmann::json::array({0, 0});
    CHECK(s["interiorDim"] == (origin ? 1 : 0));
  }
  CHECK(j.contains("timing"));
  CHECK(j["violations"].empty());
}

TEST_CASE("expected dimensions decide the exit code") {
  CHECK(invoke({"tpa", "probe", "--algebra", "virasoro-generic", "--q", "2", "--window", "4", "--interior", "2",
                "--expect-dim", "0"}).code == 0);
  CHECK(invoke({"tpa", "probe", "--algebra", "virasoro-generic", "--q", "2", "--window", "4", "--interior", "2",
                "--expect-dim", "1"}).code == 1);
  CHECK(invoke({"solve", "--algebra", "virasoro-generic", "--window", "3", "--interior", "1", "--shifts", "1",
                "--expect-dim", "1"}).code == 0);
  CHECK(invoke({"solve", "--algebra", "virasoro-generic", "--window", "3", "--interior", "1", "--shifts", "1",
                "--expect-dim", "2"}).code == 1);
}

TEST_CASE("verify candidates") {
  const Run h = invoke({"verify", "--algebra", "torus-root", "--t", "3", "--window", "6", "--candidate", "thmH", "--a",
                        "0", "--c", "1"});
  CHECK(h.code == 0);
  CHECK(nlohmann::json::parse(h.out)["results"]["violations"] == 0);
  const Run f = invoke({"verify", "--algebra", "virasoro-root", "--t", "3", "--window", "4", "--candidate", "thmF",
                        "--shift", "3,0", "--kappa", "[0, 1]", "--center", "0", "--center-at", "3,3=5"});
  CHECK(f.code == 0);
  const Run g = invoke({"verify", "--algebra", "torus-generic", "--q", "3/2", "--window", "3", "--candidate",
                        "torus-generic", "--c", "1", "--d", "1", "--format", "csv"});
  CHECK(g.code == 0);
  CHECK(g.out.rfind("candidate,constraintsChecked,violations\ntorus-generic,", 0) == 0);
}

TEST_CASE("configuration errors exit 2 with one line") {
  const std::vector<std::vector<std::string>> bad{
      {"solve", "--algebra", "virasoro-generic", "--window", "abc"},
      {"solve", "--algebra", "virasoro-generic", "--bogus"},
      {"solve", "--algebra", "virasoro-generic", "--q", "1"},
      {"solve", "--algebra", "virasoro-generic", "--q", "x/y"},
      {"solve", "--algebra", "virasoro-root", "--t", "2"},
      {"solve", "--algebra", "virasoro-generic", "--window", "3", "--interior", "3"},
      {"solve", "--algebra", "witt"},
      {"solve", "--window", "3"},
      {"verify", "--algebra", "virasoro-root", "--candidate", "thmF", "--shift", "1,0"},
      {"verify", "--algebra", "virasoro-generic", "--candidate", "thmH"},
      {"verify", "--algebra", "virasoro-generic", "--candidate", "nonsense"},
      {"jacobi", "--algebra", "virasoro-generic", "--expect-dim", "0"},
      {"tpa", "example", "--algebra", "virasoro-root", "--v", "1,0"},
      {"tpa", "verify", "--algebra", "virasoro-root", "--product", "/nonexistent/file.json"},
      {"relations", "--algebra", "torus-root"},
      {},
  };
  for (const auto& args : bad) {
    const Run r = invoke(args);
    CHECK(r.code == 2);
    CHECK(lines(r.err) == 1);
    CHECK(r.out.empty());
  }
}

TEST_CASE("tpa commands") {
  const Run ex = invoke({"tpa", "example", "--algebra", "virasoro-root", "--t", "3", "--window", "4"});
  CHECK(ex.code == 0);
  const auto j = nlohmann::json::parse(ex.out);
  CHECK(j["results"]["product"].size() == 1);
  CHECK(j["results"]["productConditions"].size() == 3);

  // a failing product read from disk
  const auto path = temp_path("halfder_shift_product.json");
  {
    std::ofstream f(path);
    f << R"([{"a":[1,0],"b":[0,1],"terms":[{"degree":[1,1],"tag":"L","coeff":"1"}]},
             {"a":[0,1],"b":[1,1],"terms":[{"degree":[1,2],"tag":"L","coeff":"1"}]},
             {"a":[1,0],"b":[1,1],"terms":[{"degree":[2,1],"tag":"L","coeff":"1"}]}])";
  }
  const Run bad = invoke({"tpa", "verify", "--algebra", "virasoro-generic", "--window", "3", "--product", path.string()});
  CHECK(bad.code == 1);
  CHECK(nlohmann::json::parse(bad.out)["results"]["compatibilityViolations"] > 0);
  std::filesystem::remove(path);
}

TEST_CASE("generator relations") {
  const Run r = invoke({"relations", "--algebra", "torus-generic", "--q", "2"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["results"]["relations"].size() == 10);
}

TEST_CASE("jacobi command") {
  const Run r = invoke({"jacobi", "--algebra", "torus-root", "--t", "4", "--window", "2", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 3);
}

TEST_CASE("reports are deterministic and written to --out") {
  RunConfig cfg;
  cfg.command = "solve";
  cfg.algebra = "virasoro-root";
  cfg.t = 3;
  cfg.window = 4;
  cfg.interior = 2;
  cfg.shifts = 3;
  cfg.emit_basis = true;
  const std::string a = canonical_dump(run(cfg));
  const std::string b = canonical_dump(run(cfg));
  CHECK(a == b);
  CHECK(a.find("timing") == std::string::npos);

  const auto path = temp_path("halfder_report.json");
  const Run r = invoke({"solve", "--algebra", "virasoro-root", "--t", "3", "--window", "4", "--interior", "2", "--shifts",
                        "3", "--basis", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  auto j = nlohmann::json::parse(in);
  CHECK(j.contains("timing"));
  j.erase("timing");
  CHECK(j.dump(2) + "\n" == a);
  std::filesystem::remove(path);
}
