#include "ds2aw/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "ds2aw/error.hpp"
#include "ds2aw/field_io.hpp"
#include "ds2aw/fieldgen.hpp"
#include "ds2aw/refsolver.hpp"

namespace ds2aw {

namespace fs = std::filesystem;
using nlohmann::json;

AnalyzeResult analyze(const RunConfig& cfg) {
  const int radius = effective_search_radius(cfg);
  return {enumerate_modes(cfg.L_x, cfg.L_y, cfg.a, radius),
          check_genericity(cfg.L_x, cfg.L_y, cfg.a, radius)};
}

SpectralData spectrum(const RunConfig& cfg) {
  return build_spectral_data(cfg.L_x, cfg.L_y, cfg.eps, perturbation_field(cfg),
                             cfg.a, effective_search_radius(cfg));
}

ThetaParams theta_params_for(const RunConfig& cfg, const SpectralData& sd) {
  ThetaParams params = adaptive_theta_params(sd, cfg.times, cfg.theta.tail_tol);
  if (cfg.theta.radius) {
    params.truncation_radius = *cfg.theta.radius;
    params.adaptive = false;
  }
  return params;
}

std::vector<Field> evolve_fieldgen(const RunConfig& cfg, int threads) {
  const SpectralData sd = spectrum(cfg);
  return evaluate_grid(cfg.times, cfg.nx, cfg.ny, sd, theta_params_for(cfg, sd),
                       threads);
}

std::vector<Field> evolve_reference(const RunConfig& cfg) {
  Ds2Solver solver(cfg.L_x, cfg.L_y, cfg.nx, cfg.ny,
                   {cfg.solver.enforce_dt_bound, cfg.solver.dealias});
  const Field u0 = initial_field(cfg);
  const double T = cfg.times.empty() ? 0.0 : cfg.times.back();
  return solver.evolve(u0, T, cfg.dt, cfg.times).snapshots;
}

int resolve_threads(std::optional<int> flag) {
  int n = 1;
  if (flag) {
    n = *flag;
  } else if (const char* env = std::getenv("DS2AW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) {
      throw Error(ErrorCode::ConfigParse,
                  std::string("DS2AW_THREADS is not a count: ") + env);
    }
    n = static_cast<int>(v);
  }
  if (n < 0) throw Error(ErrorCode::ConfigParse, "thread count is negative");
  if (n == 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_run(const fs::path& dir, const std::string& kind,
               const std::vector<Field>& fields, const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string());
  json snaps = json::array();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "u_%04zu", i);
    json entry = {{"index", i}, {"t", fields[i].t}};
    if (cfg.outputs.bin) {
      const std::string name = std::string(stem) + ".bin";
      write_field_binary(dir / name, fields[i]);
      entry["bin"] = name;
    }
    if (cfg.outputs.csv) {
      const std::string name = std::string(stem) + ".csv";
      write_field_csv(dir / name, fields[i]);
      entry["csv"] = name;
    }
    snaps.push_back(entry);
  }
  write_json(dir / "manifest.json", {{"schema", "ds2aw.manifest/1"},
                                     {"kind", kind},
                                     {"config_hash", config_hash(cfg)},
                                     {"config", to_json(cfg)},
                                     {"snapshots", snaps}});
}

std::vector<Field> read_run(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error(ErrorCode::Io, "no manifest.json in " + dir.string());
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, "unreadable manifest in " + dir.string());
  }
  std::vector<Field> out;
  for (const json& s : manifest.value("snapshots", json::array())) {
    if (!s.contains("bin")) {
      throw Error(ErrorCode::Io,
                  "run " + dir.string() + " has no binary snapshots");
    }
    out.push_back(read_field_binary(dir / s["bin"].get<std::string>()));
  }
  return out;
}

}  // namespace ds2aw
