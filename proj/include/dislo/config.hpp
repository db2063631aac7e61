#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "dislo/grid.hpp"
#include "dislo/kernel.hpp"
#include "dislo/scheme.hpp"

namespace dislo {

struct ProfileConfig {
  /// "arctan" or "table".
  std::string kind = "arctan";
  /// Two-column CSV for kind == "table".
  std::string path;

  friend bool operator==(const ProfileConfig&, const ProfileConfig&) = default;
};

struct OutputConfig {
  /// Snapshot cadence in steps; 0 writes only the initial and final states.
  std::size_t every_k_steps = 7000;
  std::string dir = "out";

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

/// Full run description. Defaults are the long reference run (P=50, N=500,
/// M=400, dt=0.02, T=1400) with the arctan profile and A = zeta = 1.
struct RunConfig {
  KernelSpec kernel;
  double P = 50.0;
  std::size_t N = 500;
  int M = 400;
  SigmaMode sigma_mode = SigmaMode::cesaro;
  int quadrature_oversample = 16;
  ProfileConfig profile;
  SchemeConfig scheme;
  OutputConfig output;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.kernel.amplitude == b.kernel.amplitude && a.kernel.zeta == b.kernel.zeta &&
           a.P == b.P && a.N == b.N && a.M == b.M && a.sigma_mode == b.sigma_mode &&
           a.quadrature_oversample == b.quadrature_oversample && a.profile == b.profile &&
           a.scheme == b.scheme && a.output == b.output;
  }
};

/// Validates the whole document, collecting every violation with its key path
/// (unknown keys, type mismatches, constraint failures) into one ConfigError.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a JSON file; malformed JSON is a ConfigError.
RunConfig load_config(const std::string& path);

/// Full document with every key present; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& c);

/// Cross-field checks (N >= M, P >= max(1, zeta), T multiple of dt, ...).
void validate(const RunConfig& c);

InitialProfile make_profile(const RunConfig& c);

/// Sets a dotted key such as "domain.P" in a config and re-validates.
RunConfig with_override(const RunConfig& c, const std::string& dotted_key,
                        const nlohmann::json& value);

}  // namespace dislo
