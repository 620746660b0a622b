#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "limitset/cli.hpp"

using namespace limitset;

namespace {

const std::string kData = LIMITSET_DATA_DIR;
const std::string kWord = "ba^-1ba^-1ba^-1ba^-1b^-1aba^-1ba^-1b^-1aba^-1";

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "limitset");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("limitset_cli_" + name);
  std::filesystem::remove_all(p);
  return p.string();
}

}  // namespace

TEST_CASE("classify") {
  const Run r = cli({"classify", kData + "/triangle.json", "--word", kWord});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["result"]["classification"]["tag"] == "ComplexSpectrum");
  CHECK(j["result"]["classification"]["order"]["kind"] == "ProvablyInfinite");
  CHECK(j["seed"] == 1);
  CHECK(j["config"]["input"] == kData + "/triangle.json");

  const Run e = cli({"classify", kData + "/triangle.json", "--word", ""});
  CHECK(e.code == 0);
  CHECK(Json::parse(e.out)["result"]["classification"]["tag"] == "Identity");

  const Run bad = cli({"classify", kData + "/triangle.json", "--word", "a b x"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("position 4") != std::string::npos);
}

TEST_CASE("criteria exit codes") {
  const Run ok = cli({"criteria", kData + "/triangle.json"});
  CHECK(ok.code == 0);
  const Json j = Json::parse(ok.out);
  CHECK(j["result"]["verdict"] == "FullLimitSet");
  CHECK(j["result"]["witness_criterion"] == 3);
  CHECK(cli({"criteria", kData + "/block_reducible.json"}).code == 3);
  const Run zero = cli({"criteria", kData + "/triangle.json", "--budget", "0"});
  CHECK(zero.code == 3);
  CHECK(Json::parse(zero.out)["result"]["horizon"] == 0);
}

TEST_CASE("usage errors") {
  CHECK(cli({"classify", kData + "/missing.json", "--word", "a"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"criteria", kData + "/triangle.json", "--tol-gp", "1e-3"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("limit-cone plot is n = 3 only") {
  const std::string dir = temp_dir("n4");
  std::filesystem::create_directories(dir);
  const std::string input = dir + "/n4.json";
  std::ofstream(input) << R"({"n": 4, "generators": [{"name": "a", "rows": [["2","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1/2"]]}]})";
  const Run r = cli({"limit-cone", input, "--max-len", "2", "--plot", "--out", dir});
  CHECK(r.code == 0);
  CHECK(r.err.find("plot skipped") != std::string::npos);
  CHECK(std::filesystem::exists(dir + "/limit_cone.json"));
  CHECK_FALSE(std::filesystem::exists(dir + "/limit_cone.svg"));

  const std::string d3 = temp_dir("cyc");
  const Run c = cli({"limit-cone", kData + "/cyclic_diagonal.json", "--max-len", "3", "--plot", "--out", d3});
  CHECK(c.code == 0);
  CHECK(std::filesystem::exists(d3 + "/limit_cone.svg"));
}

TEST_CASE("exponent CSV and pingpong failure") {
  const Run e = cli({"exponent", kData + "/cyclic_diagonal.json", "--max-len", "40", "--format", "csv"});
  CHECK(e.code == 0);
  CHECK(e.out.rfind("# limitset", 0) == 0);
  CHECK(e.out.find("root,R,count,slope,residual") != std::string::npos);

  const Run p = cli({"pingpong", kData + "/diagonal_seed.json", "-m", "0", "--samples", "64"});
  CHECK(p.code == 3);
  CHECK(Json::parse(p.out)["result"]["certificate"]["status"] == "Eq33Failed");
}
