#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace locmom::cli {

/// Every setting of one run. Unset fields keep these defaults; a config file
/// overrides them and flags override the file.
struct RunConfig {
  std::string command;
  int grid_n = 512;
  double q_min = -20.0;
  double q_max = 20.0;
  double hbar = 1.0;
  double mass = 1.0;
  /// canonical recipe text
  std::string state = "gaussian(s=1,k0=2,q0=0)";
  /// "p" or "q"
  std::string observable = "p";
  /// S, C, MH, W or all
  std::string definition = "all";
  /// 1..4 or "variance"
  std::string order = "variance";
  /// csv, json or binary
  std::string format = "csv";
  std::string out;
  double mask_eps = 1e-10;
  /// wigner, mh or classical
  std::string kind = "wigner";
  std::string potential = "free";
  double dt = 1e-3;
  int steps = 100;
  int stride = 1;
  /// path prefix for trace CSVs; empty disables the export
  std::string export_prefix;

  /// Canonical JSON; keys in declaration order, recipe in canonical text.
  nlohmann::ordered_json to_json() const;
  /// Accepts any subset of the keys, the rest taken from base. Throws
  /// InvalidArgument on unknown keys or wrong types.
  static RunConfig from_json(const nlohmann::json& j, RunConfig base);
  static RunConfig from_json(const nlohmann::json& j) { return from_json(j, RunConfig{}); }

  /// Checks every field against the library preconditions and canonicalizes
  /// the recipe. Throws InvalidArgument naming the field.
  void validate();
};

/// Parses argv (without the program name), runs one command and returns the
/// exit code: 0 success, 2 configuration error, 3 numerical precondition,
/// 4 internal self-check. Errors are a single JSON line on err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace locmom::cli
