#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "limitset/serialize.hpp"

namespace limitset {

struct RunConfig {
  std::string command;
  std::string input;
  std::string word;        // classify; limit-cone mark
  int max_len = -1;        // -1: command default
  int budget = -1;         // -1: command default
  std::uint64_t seed = 1;
  int workers = 0;         // 0: available parallelism
  std::string out_dir;     // empty: stdout
  std::string format = "json";
  bool plot = false;
  bool dedup = true;
  bool list = false;
  std::optional<double> tol_wall, tol_gp;
  // pingpong
  std::string beta;        // generator name; default last
  double r = 0.1;
  long m = 1;
  std::size_t samples = 1000;
  bool anosov = false;
};

enum ExitCode { kExitOk = 0, kExitUsage = 2, kExitNoWitness = 3, kExitNumeric = 4 };

// Config echo embedded in every output (no host- or time-dependent fields).
Json config_json(const RunConfig& cfg);

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace limitset
