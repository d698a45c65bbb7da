#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "stieltjes/serialize.hpp"

namespace stieltjes::cli {

struct RunConfig {
  std::uint64_t seed = 42;
  Index dim_m = 2;
  Index dim_k = 3;
  std::optional<double> tol;
  std::string grid = "arcs:24";
  std::string format = "json";
  std::string out;
  std::string instance;            // path of an instance or gen bundle
  std::string member = "system";   // which part of a gen bundle to use
  std::string suite;               // rs | sector | kernel | equiv
  std::size_t count = 3;           // instances per verify-all
};

struct CommandOutput {
  int exit_code = 0;
  std::string text;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

int exit_code_for(ErrorKind kind);

CommandOutput cmd_gen(const RunConfig& cfg);
CommandOutput cmd_eval(const RunConfig& cfg);
CommandOutput cmd_check(const RunConfig& cfg);
CommandOutput cmd_rep(const RunConfig& cfg);
CommandOutput cmd_limits(const RunConfig& cfg);
CommandOutput cmd_verify_all(const RunConfig& cfg);

// runs a command, turning library errors into an error report and exit code
CommandOutput run_command(const std::string& name, const RunConfig& cfg);

// instance JSON: a family instance, or a gen bundle resolved through member
Json load_instance(const RunConfig& cfg);

}  // namespace stieltjes::cli
