#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "fixpave/games.hpp"
#include "fixpave/pave.hpp"

namespace fixpave::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInvalidSpec = 2,
  kBudgetExceeded = 3,
};

/// Command-line overrides; unset fields fall back to the spec, then defaults.
struct Overrides {
  std::optional<double> delta_min;
  std::optional<std::size_t> max_boxes;
  std::optional<unsigned> threads;
  std::optional<double> tol;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

struct Outcome {
  int exit_code = kOk;
  /// Result document (JSON or CSV); empty when the spec was rejected.
  std::string payload;
  /// Where the payload goes; nullopt means standard output.
  std::optional<std::string> path;
  /// Human-readable diagnostics for the error stream.
  std::string diagnostics;
};

/// Settings after applying flag > FIXPAVE_THREADS (threads only) > spec > default.
struct EffectiveConfig {
  PaveConfig pave;
  ArgoptConfig argopt;
  /// Unset means each kind picks its own default.
  std::optional<double> tol;
  std::string format = "json";
  std::optional<std::string> path;
};

/// Throws JsonSyntaxError or SchemaError.
EffectiveConfig effective_config(std::string_view spec_text, const Overrides& flags,
                                 const char* env_threads = nullptr);

/// Validate and solve one problem spec. `env_threads` plays the role of
/// FIXPAVE_THREADS and is consulted only when no --threads flag is given.
/// Nothing is written; see run() for that.
Outcome solve(std::string_view spec_text, const Overrides& flags, const char* env_threads = nullptr);

/// Reads the spec file, solves it, writes the result and returns the exit code.
int run(const std::string& spec_path, const Overrides& flags, std::ostream& out, std::ostream& err);

}  // namespace fixpave::cli
