#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ds2aw/config.hpp"
#include "ds2aw/curve.hpp"
#include "ds2aw/field.hpp"
#include "ds2aw/modes.hpp"
#include "ds2aw/theta.hpp"

namespace ds2aw {

struct AnalyzeResult {
  std::vector<Mode> modes;
  GenericityReport report;
};

AnalyzeResult analyze(const RunConfig& cfg);
SpectralData spectrum(const RunConfig& cfg);
ThetaParams theta_params_for(const RunConfig& cfg, const SpectralData& sd);

// Snapshots at cfg.times.
std::vector<Field> evolve_fieldgen(const RunConfig& cfg, int threads);
std::vector<Field> evolve_reference(const RunConfig& cfg);

// Explicit value, else DS2AW_THREADS, else 1; 0 means all hardware threads.
int resolve_threads(std::optional<int> flag);

// Writes one file per snapshot and format plus manifest.json.
void write_run(const std::filesystem::path& dir, const std::string& kind,
               const std::vector<Field>& fields, const RunConfig& cfg);
std::vector<Field> read_run(const std::filesystem::path& dir);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace ds2aw
