#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nplab/error.hpp"
#include "nplab/io.hpp"

using namespace nplab;

namespace {

int run_cli(const std::string& args, std::string* out = nullptr) {
  auto tmp = std::filesystem::temp_directory_path() / "np_lab_cli_out.txt";
  std::string cmd = std::string(NPLAB_CLI) + " " + args + " > " + tmp.string() + " 2>/dev/null";
  int st = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

ExperimentConfig cfg(const std::string& cmd, std::vector<std::vector<long>> V, long p) {
  ExperimentConfig c;
  c.command = cmd;
  c.V = std::move(V);
  c.p = p;
  return c;
}

}  // namespace

TEST_CASE("rationals serialize as num/den") {
  CHECK(q_json(Rational(1, 3)) == "1/3");
  CHECK(q_json(Rational(-4, 6)) == "-2/3");
  CHECK(q_json(Rational(5)) == "5/1");
  CHECK(q_json(Rational(0)) == "0/1");
}

TEST_CASE("config round trip and schema") {
  auto c = cfg("compare", {{2}}, 11);
  c.f = std::map<IVec, long>{{{2}, 1}, {{1}, 3}};
  c.seed = 7;
  c.kmax = 2;
  auto j = config_to_json(c);
  auto c2 = config_from_json(j);
  CHECK(config_to_json(c2) == j);
  CHECK(c2.f->at({1}) == 3);
  CHECK(*c2.seed == 7);

  json bad = {{"V", {{2}}}, {"p", 11}, {"colour", "red"}};
  CHECK_THROWS_AS(config_from_json(bad), Error);
  json wrong = {{"p", "eleven"}};
  CHECK_THROWS_AS(config_from_json(wrong), Error);
  json vs = {{"V", "[[2,0],[0,3]]"}};
  CHECK(config_from_json(vs).V == std::vector<std::vector<long>>{{2, 0}, {0, 3}});
}

TEST_CASE("polynomial and matrix parsing") {
  auto f = parse_fpoly(json::parse(R"({"[2,0]": "1", "[0,3]": 4})"));
  CHECK(f.size() == 2);
  CHECK(f.at({0, 3}) == 4);
  CHECK_THROWS_AS(parse_fpoly(json::parse(R"({"[2,0]": "x"})")), Error);
  CHECK_THROWS_AS(parse_fpoly(json::parse(R"({"2,0": "1"})")), Error);
  CHECK(parse_matrix("[[1,0],[1,2]]") == std::vector<std::vector<long>>{{1, 0}, {1, 2}});
  CHECK_THROWS_AS(parse_matrix("[[1,0],[1,"), Error);
  MPoly g = MPoly::var(11, 2, 0) * MPoly::var(11, 2, 1).scale(3);
  auto j = mpoly_to_json(g);
  CHECK(j["terms"] == 1);
  CHECK(j["coefficients"]["[1,1]"] == "3");
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(cfg("polygon", {{2}}, 4)), Error);
  CHECK_THROWS_AS(validate(cfg("polygon", {{1, 0}, {0, 0}}, 5)), Error);
  CHECK_THROWS_AS(validate(cfg("polygon", {{1, 0}, {2, 0}}, 5)), Error);
  CHECK_THROWS_AS(validate(cfg("verify", {{2}}, 2)), Error);  // p | vol
  CHECK_THROWS_AS(validate(cfg("compare", {{2}}, 11)), Error);
  CHECK_THROWS_AS(validate(cfg("frobnicate", {{2}}, 11)), Error);
  CHECK_NOTHROW(validate(cfg("polygon", {{2, 0}, {0, 3}}, 29)));
}

TEST_CASE("every report carries config, version and hypothesis") {
  auto c = cfg("polygon", {{2, 0}, {0, 3}}, 29);
  c.lmax = 12;
  auto out = run_command(c);
  CHECK(out.report["tool"]["version"] == tool_version());
  CHECK(out.report["config"] == config_to_json(c));
  CHECK(out.report["hypothesis"]["holds"] == false);
  bool found = false;
  for (const auto& g : out.report["gaps"])
    if (g["x"] == 6 && g["side"] == "open") {
      CHECK(g["gap"] == "1/3");
      found = true;
    }
  CHECK(found);
  for (const auto& [name, body] : out.files) {
    if (name == "report.json") continue;
    CHECK(body.rfind("# np-lab ", 0) == 0);
    CHECK(body.find("# hypothesis: ") != std::string::npos);
  }
}

TEST_CASE("reruns are byte identical") {
  std::vector<ExperimentConfig> cs;
  cs.push_back(cfg("polygon", {{1, 0}, {1, 2}}, 13));
  auto v = cfg("verify", {{2}}, 11);
  v.kmax = 2;
  v.blocks = true;
  cs.push_back(v);
  auto cm = cfg("compare", {{2}}, 11);
  cm.f = std::map<IVec, long>{{{2}, 1}, {{1}, 2}};
  cm.lmax = 3;
  cs.push_back(cm);
  auto en = cfg("enumerate", {{2, 0}, {0, 3}}, 29);
  en.k = 2;
  cs.push_back(en);
  for (const auto& c : cs) {
    auto a = run_command(c), b = run_command(c);
    REQUIRE(a.files.size() == b.files.size());
    for (size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i] == b.files[i]);
  }
}

TEST_CASE("verify and matrix M reports") {
  auto v = cfg("verify", {{2}}, 11);
  v.kmax = 3;
  auto out = run_command(v);
  CHECK(out.exit_code == 0);
  CHECK(out.report["passed"] == true);
  CHECK(out.report["results"].size() == 6);

  auto low = cfg("verify", {{2}}, 3);
  low.kmax = 2;
  auto lo = run_command(low);
  CHECK(lo.exit_code == 0);
  CHECK(lo.report["hypothesis"]["holds"] == false);

  ExperimentConfig m;
  m.command = "verify";
  m.matrixM = true;
  m.p = 11;
  m.w = {5};
  m.k = 2;
  auto mo = run_command(m);
  CHECK(mo.exit_code == 0);
  CHECK(mo.report["matrix_M"][0]["nonzero"] == true);
  CHECK(mo.report["hypothesis"]["applicable"] == false);
}

TEST_CASE("compare report") {
  auto c = cfg("compare", {{2}}, 11);
  c.f = std::map<IVec, long>{{{2}, 1}, {{1}, 1}};
  c.kmax = 1;
  auto out = run_command(c);
  CHECK(out.exit_code == 0);
  CHECK(out.report["match"] == true);
  CHECK(out.report["polygon_passes"] == true);
  CHECK(out.report["comparison"][2]["val_oracle"] == 5);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorCode::Config, true) == 2);
  CHECK(exit_code_for(ErrorCode::ScaleExceeded, true) == 2);
  CHECK(exit_code_for(ErrorCode::VerificationFailed, true) == 3);
  CHECK(exit_code_for(ErrorCode::NotAUnit, true) == 3);
  CHECK(exit_code_for(ErrorCode::Mismatch, false) == 4);
}

TEST_CASE("command line") {
  std::string out;
  CHECK(run_cli("polygon --V \"[[2,0],[0,3]]\" --p 29 --lmax 30", &out) == 0);
  auto j = json::parse(out);
  CHECK(j["config"]["lmax"] == 30);
  CHECK(run_cli("polygon --V \"[[2]]\" --p 4") == 2);
  CHECK(run_cli("polygon --V \"[[1,0],[0,0]]\" --p 5") == 2);
  CHECK(run_cli("polygon --V \"[[2]]\" --p 11 --nonsense 1") == 2);
  CHECK(run_cli("verify --V \"[[2]]\" --p 11 --kmax 3") == 0);
  CHECK(run_cli("verify --V \"[[2]]\" --p 3 --kmax 2", &out) == 0);
  CHECK(json::parse(out)["hypothesis"]["holds"] == false);
  CHECK(run_cli("verify --matrixM --w 5 --k 2 --p 11", &out) == 0);
  CHECK(json::parse(out)["matrix_M"][0]["det"] != 0);
  CHECK(run_cli("compare --V \"[[2]]\" --p 11 --f '{\"[2]\":\"1\",\"[1]\":\"1\"}' --kmax 1") == 0);
  CHECK(run_cli("compare --V \"[[2]]\" --p 11") == 2);
  CHECK(run_cli("compare --V \"[[2,0],[0,3]]\" --p 29 --f '{\"[2,0]\":\"1\",\"[0,3]\":\"1\",\"[2,3]\":\"1\"}'") == 2);
  CHECK(run_cli("enumerate --V \"[[2]]\" --p 11 --k 2") == 0);

  auto dir = std::filesystem::temp_directory_path() / "np_lab_cfg_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "c.json");
    f << R"({"command": "polygon", "V": [[2]], "p": 11, "lmax": 6})";
  }
  CHECK(run_cli("polygon --config " + (dir / "c.json").string() + " --out " + (dir / "o").string()) == 0);
  CHECK(std::filesystem::exists(dir / "o" / "slopes.csv"));
  CHECK(run_cli("verify --config " + (dir / "c.json").string()) == 2);  // config for another command
  std::filesystem::remove_all(dir);
}
