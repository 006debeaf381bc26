#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = utm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "utm_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("certify: exponential datum") {
  const Run r = run({"certify", "--u0", "exp_decay:a=1", "--scan", "1e-2:1e2:400"});
  REQUIRE(r.code == 0);
  const json d = json::parse(r.out);
  CHECK(d["result"]["gap"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(d["result"]["M"].get<double>() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(d["result"]["lambda_star"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(d["result"]["verdict"] == "obstructed");
  CHECK(d["spec"]["params"]["tolerance"].get<double>() == 1e-10);
}

TEST_CASE("solve-halfline: constant boundary datum") {
  const Run r = run({"solve-halfline", "--u0", "zero", "--g", "const:1", "--T", "1", "--x", "1", "--t", "1"});
  REQUIRE(r.code == 0);
  const json d = json::parse(r.out);
  CHECK(std::abs(d["result"]["rows"][0]["value"].get<double>() - 0.479500) < 1e-6);
}

TEST_CASE("check-gr: manufactured family") {
  const Run r = run({"check-gr", "--manufactured", "exp:a=1", "--lambda", "2,-1", "--t", "0.7"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["result"]["max_magnitude"].get<double>() < 1e-10);

  const Run s = run({"check-gr", "--manufactured", "sine:n=2", "--lambda", "2,-1;0,0;1,1", "--T", "0.5"});
  REQUIRE(s.code == 0);
  CHECK(json::parse(s.out)["result"]["max_magnitude"].get<double>() < 1e-10);
}

TEST_CASE("growth-test flags") {
  const json one = json::parse(run({"growth-test", "--g", "const:1"}).out);
  CHECK(one["result"]["flag"] == "unbounded-growth");
  const json zero = json::parse(run({"growth-test", "--g", "zero"}).out);
  CHECK(zero["result"]["flag"] == "bounded");
}

TEST_CASE("errors map to exit codes and a JSON object on stderr") {
  const Run bad_id = run({"certify", "--u0", "bogus"});
  CHECK(bad_id.code == 1);
  CHECK(json::parse(bad_id.err)["error"] == "validation");

  const Run bad_flag = run({"certify", "--u0", "zero", "--nonsense"});
  CHECK(bad_flag.code == 1);

  const Run horizon = run({"solve-halfline", "--u0", "zero", "--g", "const:1", "--T", "1", "--x", "1", "--t", "2"});
  CHECK(horizon.code == 1);
  CHECK(json::parse(horizon.err)["error"] == "horizon");

  const Run refused = run({"attempt-halfline", "--u0", "zero"});
  CHECK(refused.code == 1);
  CHECK(json::parse(refused.err)["error"] == "certificate");

  const Run rank = run({"synthesize", "--u0", "sine_mode:n=1", "--T", "0.5", "--mu", "0"});
  CHECK(rank.code == 2);
  CHECK(json::parse(rank.err)["error"] == "rank_collapse");
}

TEST_CASE("unknown spec keys are rejected") {
  const fs::path p = scratch("unknown.json");
  std::ofstream(p) << R"({"command":"certify","u0":{"id":"zero"},"colour":"red"})";
  const Run r = run({"certify", "--spec", p.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("colour") != std::string::npos);
  CHECK_THROWS(utm::cli::normalize(json{{"command", "certify"}, {"params", {{"bogus", 1}}}}));
}

TEST_CASE("normalize echoes every default") {
  const json s = utm::cli::normalize(json{{"command", "synthesize"}, {"u0", {{"id", "sine_mode"}}}});
  CHECK(s["problem"] == "interval");
  CHECK(s["L"] == 1.0);
  CHECK(s["params"]["K"] == 12);
  CHECK(s["params"]["collocation"] == 48);
  CHECK(s["contour"]["panels"] == 8);
  CHECK(s["contour"]["lambda_max"].is_null());
  CHECK(s["output"]["format"] == "json");
}

TEST_CASE("property: output files round-trip bit-for-bit") {
  const std::vector<std::vector<std::string>> cases{
      {"solve-interval", "--u0", "gaussian_bump:c=0.4,w=0.2", "--h", "sine:c=1,w=3", "--T", "0.3", "--x", "0.1:0.9:5"},
      {"certify", "--u0", "indicator:b=1", "--scan", "0.5:6:50:linear"},
      {"halfspace-certify", "--u0", "exp_decay:a=1", "--u0-tangential", "gaussian:w=1", "--scan", "1e-1:1e1:20"},
  };
  int i = 0;
  for (auto args : cases) {
    for (const std::string fmt : {"json", "csv", "jsonl"}) {
      const fs::path first = scratch("first" + std::to_string(i) + "." + fmt);
      const fs::path second = scratch("second" + std::to_string(i) + "." + fmt);
      auto a = args;
      a.insert(a.end(), {"--format", fmt, "-o", first.string()});
      REQUIRE(run(a).code == 0);
      const Run b = run({args[0], "--spec", first.string(), "-o", second.string()});
      REQUIRE(b.code == 0);
      // Only the recorded output path may differ.
      auto body = [&](const fs::path& p) {
        const std::string text = slurp(p);
        if (fmt == "json") return json::parse(text)["result"].dump();
        return text.substr(text.find('\n'));
      };
      CHECK(body(first) == body(second));
      ++i;
    }
  }
}

TEST_CASE("property: no hidden state between invocations") {
  const std::vector<std::string> args{"oracle-compare", "--u0", "exp_decay:a=1", "--g", "exp:c=1,b=1", "--x", "0.5,1",
                                      "--nx", "600", "--nt", "200", "--x-max", "6", "--T", "0.5"};
  const Run a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["result"]["max_abs_diff"].get<double>() < 1e-3);
}

TEST_CASE("csv output carries the spec header and one row per point") {
  const Run r = run({"solve-halfline", "--u0", "exp_decay:a=1", "--g", "exp:c=1,b=1", "--x", "0.5,1,2", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# {", 0) == 0);
  std::getline(in, line);
  CHECK(line == "imag,t,value,x");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("every subcommand has help") {
  for (const auto& cmd : utm::cli::subcommands()) {
    const Run r = run({cmd, "--help"});
    CHECK(r.code == 0);
  }
}
