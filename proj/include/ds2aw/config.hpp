#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ds2aw/field.hpp"

namespace ds2aw {

inline constexpr const char* kConfigSchema = "ds2aw.config/1";

struct Harmonic {
  int n_x = 0;
  int n_y = 0;
  Complex c;
};

struct ThetaSettings {
  std::optional<int> radius;  // empty: adaptive
  double tail_tol = 1e-10;
};

struct SolverSettings {
  bool enforce_dt_bound = true;
  bool dealias = false;
};

struct OutputSettings {
  std::string dir = "out";
  bool csv = false;
  bool bin = true;
};

// Cauchy data u(x, y, 0) = a + eps v0(x, y) with v0 given either as a list
// of harmonics or as a DS2F grid file.
struct RunConfig {
  double L_x = 0.0;
  double L_y = 0.0;
  double a = 1.0;
  double eps = 0.0;
  std::vector<Harmonic> harmonics;
  std::string grid_file;
  int nx = 0;
  int ny = 0;
  std::vector<double> times;
  double dt = 1e-3;
  ThetaSettings theta;
  SolverSettings solver;
  OutputSettings outputs;
  std::optional<int> search_radius;

  bool operator==(const RunConfig&) const;
};

bool operator==(const Harmonic& p, const Harmonic& q);

// Throws config errors naming the offending field.
RunConfig parse_config(const nlohmann::json& doc,
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

// SHA-256 of the canonical serialization.
std::string config_hash(const RunConfig& cfg);

// v0 on the configured grid; harmonics are synthesized with exact grid
// phases, grid files must match periods and sizes.
Field perturbation_field(const RunConfig& cfg);

// a + eps v0 on the configured grid at t = 0.
Field initial_field(const RunConfig& cfg);

int effective_search_radius(const RunConfig& cfg);

}  // namespace ds2aw
