#include "ds2aw/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "ds2aw/error.hpp"
#include "ds2aw/field_io.hpp"
#include "ds2aw/modes.hpp"

namespace ds2aw {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigParse, "config: '" + field + "': " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) fail(path + key, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

double positive(const json& v, const std::string& field) {
  const double x = number(v, field);
  if (!(x > 0.0)) fail(field, "must be positive");
  return x;
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

Complex complex_value(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) fail(field, "expected [re, im]");
  return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) fail(path + it.key(), "unknown key");
  }
}

std::vector<Complex> grid_phases(int count, int harmonic) {
  std::vector<Complex> out(count);
  const int h = ((harmonic % count) + count) % count;
  for (int i = 0; i < count; ++i) {
    const long r = (static_cast<long>(h) * i) % count;
    out[i] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) /
                                 count);
  }
  return out;
}

}  // namespace

bool operator==(const Harmonic& p, const Harmonic& q) {
  return p.n_x == q.n_x && p.n_y == q.n_y && p.c == q.c;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return L_x == o.L_x && L_y == o.L_y && a == o.a && eps == o.eps &&
         harmonics == o.harmonics && grid_file == o.grid_file && nx == o.nx &&
         ny == o.ny && times == o.times && dt == o.dt &&
         theta.radius == o.theta.radius && theta.tail_tol == o.theta.tail_tol &&
         solver.enforce_dt_bound == o.solver.enforce_dt_bound &&
         solver.dealias == o.solver.dealias && outputs.dir == o.outputs.dir &&
         outputs.csv == o.outputs.csv && outputs.bin == o.outputs.bin &&
         search_radius == o.search_radius;
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail("", "document must be an object");
  reject_unknown(doc,
                 {"schema", "comment", "L_x", "L_y", "a", "eps", "perturbation",
                  "grid", "times", "dt", "theta", "solver", "outputs",
                  "search_radius"},
                 "");
  const json& schema = require(doc, "schema", "");
  if (!schema.is_string() || schema.get<std::string>() != kConfigSchema) {
    fail("schema", std::string("expected \"") + kConfigSchema + "\"");
  }

  RunConfig cfg;
  cfg.L_x = positive(require(doc, "L_x", ""), "L_x");
  cfg.L_y = positive(require(doc, "L_y", ""), "L_y");
  if (doc.contains("a")) cfg.a = positive(doc["a"], "a");
  cfg.eps = positive(require(doc, "eps", ""), "eps");

  const json& pert = require(doc, "perturbation", "");
  if (!pert.is_object()) fail("perturbation", "expected an object");
  reject_unknown(pert, {"harmonics", "grid_file"}, "perturbation.");
  const bool has_h = pert.contains("harmonics");
  const bool has_f = pert.contains("grid_file");
  if (has_h == has_f) {
    fail("perturbation", "give exactly one of 'harmonics' or 'grid_file'");
  }
  if (has_h) {
    const json& hs = pert["harmonics"];
    if (!hs.is_array() || hs.empty()) {
      fail("perturbation.harmonics", "expected a non-empty list");
    }
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const std::string p = "perturbation.harmonics[" + std::to_string(i) + "]";
      const json& h = hs[i];
      if (!h.is_object()) fail(p, "expected an object");
      reject_unknown(h, {"n", "c"}, p + ".");
      const json& n = require(h, "n", p + ".");
      if (!n.is_array() || n.size() != 2) fail(p + ".n", "expected [n_x, n_y]");
      Harmonic hm;
      hm.n_x = integer(n[0], p + ".n[0]");
      hm.n_y = integer(n[1], p + ".n[1]");
      if (hm.n_x == 0 && hm.n_y == 0) {
        fail(p + ".n", "the (0,0) harmonic breaks the zero-mean requirement");
      }
      hm.c = complex_value(require(h, "c", p + "."), p + ".c");
      cfg.harmonics.push_back(hm);
    }
  } else {
    const json& f = pert["grid_file"];
    if (!f.is_string() || f.get<std::string>().empty()) {
      fail("perturbation.grid_file", "expected a path");
    }
    std::filesystem::path path(f.get<std::string>());
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    cfg.grid_file = path.lexically_normal().string();
  }

  const json& grid = require(doc, "grid", "");
  if (!grid.is_object()) fail("grid", "expected an object");
  reject_unknown(grid, {"nx", "ny"}, "grid.");
  cfg.nx = integer(require(grid, "nx", "grid."), "grid.nx");
  cfg.ny = integer(require(grid, "ny", "grid."), "grid.ny");
  if (cfg.nx < 8 || cfg.ny < 8) fail("grid", "nx and ny must be at least 8");

  if (doc.contains("times")) {
    const json& ts = doc["times"];
    if (!ts.is_array()) fail("times", "expected a list");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double t = number(ts[i], "times[" + std::to_string(i) + "]");
      if (t < 0.0) fail("times", "times must be non-negative");
      if (!cfg.times.empty() && t < cfg.times.back()) {
        fail("times", "times must be sorted non-decreasing");
      }
      cfg.times.push_back(t);
    }
  }
  if (doc.contains("dt")) cfg.dt = positive(doc["dt"], "dt");

  if (doc.contains("theta")) {
    const json& th = doc["theta"];
    if (!th.is_object()) fail("theta", "expected an object");
    reject_unknown(th, {"radius", "tail_tol"}, "theta.");
    if (th.contains("radius")) {
      const json& r = th["radius"];
      if (r.is_string()) {
        if (r.get<std::string>() != "adaptive") {
          fail("theta.radius", "expected \"adaptive\" or an integer");
        }
      } else {
        const int M = integer(r, "theta.radius");
        if (M < 1 || M > 64) fail("theta.radius", "must lie in [1, 64]");
        cfg.theta.radius = M;
      }
    }
    if (th.contains("tail_tol")) {
      cfg.theta.tail_tol = positive(th["tail_tol"], "theta.tail_tol");
    }
  }

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    if (!s.is_object()) fail("solver", "expected an object");
    reject_unknown(s, {"enforce_dt_bound", "dealias"}, "solver.");
    if (s.contains("enforce_dt_bound")) {
      if (!s["enforce_dt_bound"].is_boolean()) {
        fail("solver.enforce_dt_bound", "expected a boolean");
      }
      cfg.solver.enforce_dt_bound = s["enforce_dt_bound"].get<bool>();
    }
    if (s.contains("dealias")) {
      if (!s["dealias"].is_boolean()) fail("solver.dealias", "expected a boolean");
      cfg.solver.dealias = s["dealias"].get<bool>();
    }
  }

  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    if (!o.is_object()) fail("outputs", "expected an object");
    reject_unknown(o, {"dir", "format"}, "outputs.");
    if (o.contains("dir")) {
      if (!o["dir"].is_string()) fail("outputs.dir", "expected a string");
      cfg.outputs.dir = o["dir"].get<std::string>();
    }
    if (o.contains("format")) {
      const json& f = o["format"];
      const std::string v = f.is_string() ? f.get<std::string>() : "";
      if (v == "csv") {
        cfg.outputs = {cfg.outputs.dir, true, false};
      } else if (v == "bin") {
        cfg.outputs = {cfg.outputs.dir, false, true};
      } else if (v == "both") {
        cfg.outputs = {cfg.outputs.dir, true, true};
      } else {
        fail("outputs.format", "expected csv, bin or both");
      }
    }
  }

  if (doc.contains("search_radius")) {
    const int r = integer(doc["search_radius"], "search_radius");
    if (r < 1) fail("search_radius", "must be positive");
    cfg.search_radius = r;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse,
                "config: " + path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

json to_json(const RunConfig& cfg) {
  json doc;
  doc["schema"] = kConfigSchema;
  doc["L_x"] = cfg.L_x;
  doc["L_y"] = cfg.L_y;
  doc["a"] = cfg.a;
  doc["eps"] = cfg.eps;
  if (cfg.grid_file.empty()) {
    json hs = json::array();
    for (const Harmonic& h : cfg.harmonics) {
      hs.push_back({{"n", {h.n_x, h.n_y}}, {"c", {h.c.real(), h.c.imag()}}});
    }
    doc["perturbation"] = {{"harmonics", hs}};
  } else {
    doc["perturbation"] = {{"grid_file", cfg.grid_file}};
  }
  doc["grid"] = {{"nx", cfg.nx}, {"ny", cfg.ny}};
  doc["times"] = cfg.times;
  doc["dt"] = cfg.dt;
  doc["theta"] = {{"tail_tol", cfg.theta.tail_tol}};
  if (cfg.theta.radius) {
    doc["theta"]["radius"] = *cfg.theta.radius;
  } else {
    doc["theta"]["radius"] = "adaptive";
  }
  doc["solver"] = {{"enforce_dt_bound", cfg.solver.enforce_dt_bound},
                   {"dealias", cfg.solver.dealias}};
  const char* format = cfg.outputs.csv && cfg.outputs.bin ? "both"
                       : cfg.outputs.csv                  ? "csv"
                                                          : "bin";
  doc["outputs"] = {{"dir", cfg.outputs.dir}, {"format", format}};
  if (cfg.search_radius) doc["search_radius"] = *cfg.search_radius;
  return doc;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::Io, "SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

Field perturbation_field(const RunConfig& cfg) {
  if (!cfg.grid_file.empty()) {
    Field f = read_field_binary(cfg.grid_file);
    const double tol = 1e-12 * std::max(cfg.L_x, cfg.L_y);
    if (f.nx != cfg.nx || f.ny != cfg.ny || std::abs(f.L_x - cfg.L_x) > tol ||
        std::abs(f.L_y - cfg.L_y) > tol) {
      throw Error(ErrorCode::GridMismatch,
                  "grid file " + cfg.grid_file +
                      " does not match the configured periods and grid");
    }
    f.t = 0.0;
    return f;
  }
  Field f(cfg.L_x, cfg.L_y, cfg.nx, cfg.ny, 0.0);
  for (const Harmonic& h : cfg.harmonics) {
    const std::vector<Complex> ex = grid_phases(cfg.nx, h.n_x);
    const std::vector<Complex> ey = grid_phases(cfg.ny, h.n_y);
    for (int iy = 0; iy < cfg.ny; ++iy) {
      const Complex row = h.c * ey[iy];
      for (int ix = 0; ix < cfg.nx; ++ix) f.at(ix, iy) += row * ex[ix];
    }
  }
  return f;
}

Field initial_field(const RunConfig& cfg) {
  Field f = perturbation_field(cfg);
  for (Complex& v : f.u) v = cfg.a + cfg.eps * v;
  return f;
}

int effective_search_radius(const RunConfig& cfg) {
  if (cfg.search_radius) return *cfg.search_radius;
  return std::max(1, min_search_radius(cfg.L_x, cfg.L_y, cfg.a));
}

}  // namespace ds2aw
