#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nplab/error.hpp"
#include "nplab/lattice.hpp"
#include "nplab/mpoly.hpp"
#include "nplab/rational.hpp"

namespace nplab {

using json = nlohmann::ordered_json;

const char* tool_version();

// always "num/den", also for integers
std::string q_json(const Rational& r);

struct ExperimentConfig {
  std::string command;  // polygon | verify | compare | enumerate
  std::vector<std::vector<long>> V;
  long p = 0;
  long lmax = -1;  // -1: command default
  long kmin = -1;  // -1: command default
  long kmax = -1;
  int M = -1;
  int N = 1;
  std::string side = "both";  // open | closed | both
  std::optional<std::map<IVec, long>> f;
  std::optional<u64> seed;
  bool matrixM = false;
  std::vector<long> w;  // empty with matrixM: sweep
  long k = -1;
  int l = 0;  // sweep length; 0 = 1 and 2
  int mchi = 1;
  long max_evals = 400000;
  bool blocks = false;
  std::string out;  // output directory, not embedded
};

// schema check; CONFIG on unknown keys or wrong types
ExperimentConfig config_from_json(const json& j);
json config_to_json(const ExperimentConfig& c);
// "[[2,0],[0,3]]"
std::vector<std::vector<long>> parse_matrix(const std::string& s);
// {"[2]": "1", "[1]": "3"}
std::map<IVec, long> parse_fpoly(const json& j);
json fpoly_to_json(const std::map<IVec, long>& f);
json mpoly_to_json(const MPoly& g, size_t max_terms = 64);

// CONFIG for anything that cannot run at all
void validate(const ExperimentConfig& c);

struct RunOutput {
  json report;
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  int exit_code = 0;
};

RunOutput run_command(const ExperimentConfig& c);

// exit code for an error escaping run_command
int exit_code_for(ErrorCode code, bool hypothesis);

}  // namespace nplab
