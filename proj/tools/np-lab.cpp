#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "nplab/error.hpp"
#include "nplab/io.hpp"
#include "nplab/polygon.hpp"

using namespace nplab;

namespace {

struct Flags {
  std::string config, V, f, w, side, out;
  long p = 0, lmax = 0, kmin = -1, kmax = -1, k = -1, max_evals = 0;
  int M = -1, N = 0, l = 0, mchi = 0;
  u64 seed = 0;
  bool matrixM = false, blocks = false;
};

void add_common(CLI::App* sub, Flags& fl) {
  sub->add_option("--config", fl.config, "JSON config file; flags given here override it");
  sub->add_option("--V", fl.V, "generator matrix, rows as JSON, e.g. [[2,0],[0,3]]");
  sub->add_option("--p", fl.p, "prime");
  sub->add_option("--out", fl.out, "directory for report.json and data files");
  sub->add_option("--seed", fl.seed, "seed for every random choice");
}

std::vector<long> parse_w(const std::string& s) {
  std::vector<long> w;
  std::string t = s;
  if (!t.empty() && t.front() != '[') t = "[" + t + "]";
  try {
    w = json::parse(t).get<std::vector<long>>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::Config, "cannot read w \"" + s + "\"");
  }
  return w;
}

ExperimentConfig assemble(const std::string& cmd, const Flags& fl, const CLI::App* sub) {
  ExperimentConfig c;
  if (!fl.config.empty()) {
    std::ifstream in(fl.config);
    if (!in) throw Error(ErrorCode::Config, "cannot open config " + fl.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Config, std::string("config is not JSON: ") + e.what());
    }
    c = config_from_json(j);
    if (!c.command.empty() && c.command != cmd)
      throw Error(ErrorCode::Config, "config is for \"" + c.command + "\", not \"" + cmd + "\"");
  }
  c.command = cmd;
  auto given = [&](const char* name) {
    const CLI::Option* o = sub->get_option_no_throw(name);
    return o && o->count() > 0;
  };
  if (given("--V")) c.V = parse_matrix(fl.V);
  if (given("--p")) c.p = fl.p;
  if (given("--seed")) c.seed = fl.seed;
  if (given("--out")) c.out = fl.out;
  if (given("--lmax")) c.lmax = fl.lmax;
  if (given("--kmin")) c.kmin = fl.kmin;
  if (given("--kmax")) c.kmax = fl.kmax;
  if (given("--k")) c.k = fl.k;
  if (given("--M")) c.M = fl.M;
  if (given("--N")) c.N = fl.N;
  if (given("--side")) c.side = fl.side;
  if (given("--mchi")) c.mchi = fl.mchi;
  if (given("--max-evals")) c.max_evals = fl.max_evals;
  if (given("--matrixM")) c.matrixM = true;
  if (given("--blocks")) c.blocks = true;
  if (given("--w")) c.w = parse_w(fl.w);
  if (given("--l")) c.l = fl.l;
  if (given("--f")) {
    try {
      c.f = parse_fpoly(json::parse(fl.f));
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::Config, "f is not JSON");
    }
  }
  return c;
}

bool hypothesis_of(const ExperimentConfig& c) {
  try {
    if (c.V.empty() || c.p < 2) return false;
    return hypothesis_holds(Parallelotope::from_rows(c.V), c.p);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton polygon experiments for parallelotope exponential sums"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  Flags fl;

  auto* poly = app.add_subcommand("polygon", "Hodge and improved Hodge polygons, gaps, slope counts");
  add_common(poly, fl);
  poly->add_option("--lmax", fl.lmax, "polygon length");
  poly->add_option("--kmax", fl.kmax, "largest dilate in the gap report");
  poly->add_option("--side", fl.side, "open, closed or both");
  poly->add_option("--mchi", fl.mchi, "conductor exponent of the character");

  auto* ver = app.add_subcommand("verify", "nonvanishing of the universal leading coefficients");
  add_common(ver, fl);
  ver->add_option("--kmin", fl.kmin, "first dilate");
  ver->add_option("--kmax", fl.kmax, "last dilate");
  ver->add_option("--max-evals", fl.max_evals, "interpolation budget per determinant");
  ver->add_flag("--blocks", fl.blocks, "also check the block factorization");
  ver->add_flag("--matrixM", fl.matrixM, "determinants of M(w,k) instead");
  ver->add_option("--w", fl.w, "w for --matrixM, e.g. 5 or [3,7]; omit to sweep");
  ver->add_option("--k", fl.k, "k for --matrixM");
  ver->add_option("--l", fl.l, "length of w in a sweep");

  auto* cmp = app.add_subcommand("compare", "exponential-sum oracle against the Fredholm expansion");
  add_common(cmp, fl);
  cmp->add_option("--f", fl.f, "coefficients as JSON, e.g. {\"[2]\":\"1\",\"[1]\":\"1\"}");
  cmp->add_option("--lmax", fl.lmax, "largest index l of u_l");
  cmp->add_option("--kmin", fl.kmin, "first vertex dilate");
  cmp->add_option("--kmax", fl.kmax, "last vertex dilate");
  cmp->add_option("--M", fl.M, "T-adic truncation");
  cmp->add_option("--N", fl.N, "p-adic precision");

  auto* en = app.add_subcommand("enumerate", "lattice points of a dilate and its blocks");
  add_common(en, fl);
  en->add_option("--k", fl.k, "dilate");
  en->add_option("--side", fl.side, "open, closed or both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  ExperimentConfig c;
  try {
    c = assemble(sub->get_name(), fl, sub);
    RunOutput out = run_command(c);
    std::cout << out.report.dump(2) << "\n";
    if (!c.out.empty()) {
      std::filesystem::create_directories(c.out);
      for (const auto& [name, body] : out.files) {
        std::ofstream f(std::filesystem::path(c.out) / name, std::ios::binary);
        f << body;
        if (!f) throw Error(ErrorCode::Config, "cannot write " + name);
      }
    }
    if (out.exit_code == 3) std::cerr << "VERIFICATION_FAILED under the hypothesis\n";
    if (out.exit_code == 4) std::cerr << "MISMATCH between oracle and Fredholm expansion\n";
    return out.exit_code;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code(), hypothesis_of(c));
  } catch (const std::exception& e) {
    std::cerr << "CONFIG: " << e.what() << "\n";
    return 2;
  }
}
