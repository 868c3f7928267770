// Command line front end: analyze, spectrum, evolve-fg, evolve-ref, compare.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ds2aw/config.hpp"
#include "ds2aw/error.hpp"
#include "ds2aw/pipeline.hpp"
#include "ds2aw/report.hpp"

namespace fs = std::filesystem;
using namespace ds2aw;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::optional<int> threads;
  std::optional<long> seed;  // reserved, nothing is random yet
  std::string first_run;
  std::string second_run;
};

RunConfig load_with_overrides(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (!o.out.empty()) cfg.outputs.dir = o.out;
  if (o.format == "csv") {
    cfg.outputs.csv = true;
    cfg.outputs.bin = false;
  } else if (o.format == "bin") {
    cfg.outputs.csv = false;
    cfg.outputs.bin = true;
  } else if (o.format == "both") {
    cfg.outputs.csv = cfg.outputs.bin = true;
  }
  return cfg;
}

void emit(const nlohmann::json& doc, const Options& o, const char* name) {
  std::cout << doc.dump(2) << '\n';
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_json(fs::path(o.out) / name, doc);
  }
}

int run_analyze(const Options& o) {
  const RunConfig cfg = load_config(o.config);
  const AnalyzeResult r = analyze(cfg);
  emit(modes_to_json(r.modes, r.report), o, "analyze.json");
  if (!r.report.ok) {
    std::cerr << "error[genericity]: the periods are not generic\n";
    return exit_code(ErrorCode::Genericity);
  }
  return 0;
}

int run_spectrum(const Options& o) {
  emit(spectral_to_json(spectrum(load_config(o.config))), o, "spectrum.json");
  return 0;
}

int run_evolve(const Options& o, bool finite_gap) {
  const RunConfig cfg = load_with_overrides(o);
  const auto fields = finite_gap ? evolve_fieldgen(cfg, resolve_threads(o.threads))
                                 : evolve_reference(cfg);
  write_run(cfg.outputs.dir, finite_gap ? "finite-gap" : "reference", fields,
            cfg);
  std::cout << (fs::path(cfg.outputs.dir) / "manifest.json").string() << '\n';
  return 0;
}

int run_compare(const Options& o) {
  const auto metrics = compare_runs(read_run(o.first_run), read_run(o.second_run));
  const nlohmann::json doc = metrics_to_json(metrics);
  std::cout << doc.dump(2) << '\n';
  if (!o.out.empty()) write_json(o.out, doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-gap anomalous waves of the focusing DS2 equation"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool evolve) {
    sub->add_option("--config", o.config, "Run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--seed", o.seed, "Reserved");
    if (evolve) {
      sub->add_option("--format", o.format, "Snapshot format")
          ->check(CLI::IsMember({"csv", "bin", "both"}));
      sub->add_option("--threads", o.threads, "Worker threads, 0 = all")
          ->check(CLI::NonNegativeNumber);
    }
  };
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Mode census and genericity");
  add_common(analyze_cmd, false);
  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "Leading-order curve data");
  add_common(spectrum_cmd, false);
  CLI::App* fg_cmd = app.add_subcommand("evolve-fg", "Sample the finite-gap solution");
  add_common(fg_cmd, true);
  CLI::App* ref_cmd = app.add_subcommand("evolve-ref", "Integrate DS2 directly");
  add_common(ref_cmd, true);
  CLI::App* compare_cmd = app.add_subcommand("compare", "Errors between two runs");
  compare_cmd->add_option("fg_run", o.first_run, "Finite-gap run directory")
      ->required();
  compare_cmd->add_option("ref_run", o.second_run, "Reference run directory")
      ->required();
  compare_cmd->add_option("--out", o.out, "Write metrics JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(ErrorCode::ConfigParse);
  }

  try {
    if (*analyze_cmd) return run_analyze(o);
    if (*spectrum_cmd) return run_spectrum(o);
    if (*fg_cmd) return run_evolve(o, true);
    if (*ref_cmd) return run_evolve(o, false);
    if (*compare_cmd) return run_compare(o);
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error[io]: " << e.what() << '\n';
    return exit_code(ErrorCode::Io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
