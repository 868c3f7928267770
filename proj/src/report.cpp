#include "ds2aw/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ds2aw/error.hpp"
#include "ds2aw/fieldgen.hpp"

namespace ds2aw {

using nlohmann::json;

namespace {

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

json cvec(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(cjson(v[i]));
  return out;
}

json cmat(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cjson(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json mode_json(const Mode& m) {
  return {{"n_x", m.n_x},         {"n_y", m.n_y},
          {"k_x", m.k_x},         {"k_y", m.k_y},
          {"sigma", cjson(m.sigma)}, {"unstable", m.unstable}};
}

// Index of the pair made of the negated points of pairs[j].
std::size_t mirror_of(const std::vector<ResonantPair>& pairs, std::size_t j) {
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (std::abs(pairs[k].tau_1 + pairs[j].tau_1) < 1e-9) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "pair without a mirrored partner");
}

}  // namespace

SpectralDiagnostics diagnose(const SpectralData& sd) {
  SpectralDiagnostics d;
  const double pi = std::numbers::pi;
  for (int j = 0; j < sd.g; ++j) {
    const ResonantPair& p = sd.pairs[j];
    const Complex kappa(p.mode.k_x, p.mode.k_y);
    d.resonance_residual = std::max(
        {d.resonance_residual, std::abs(p.tau_2 - p.tau_1 - kappa),
         std::abs(1.0 / p.tau_2 - 1.0 / p.tau_1 - std::conj(kappa))});
    const double sigma = std::abs(growth_rate(p.mode.k_x, p.mode.k_y, 1.0));
    d.wt_sigma_defect = std::max(
        d.wt_sigma_defect, std::abs(std::abs(sd.W_t[j]) - sigma) / sigma);
    const ResonantPair& m = sd.pairs[mirror_of(sd.pairs, j)];
    d.alpha_beta_symmetry =
        std::max(d.alpha_beta_symmetry,
                 std::abs(m.alpha * m.beta - std::conj(p.alpha * p.beta)));
    for (int k = 0; k < sd.g; ++k) {
      d.b_symmetry = std::max(d.b_symmetry, std::abs(sd.B(j, k) - sd.B(k, j)));
      if (k == j) continue;
      const double im = sd.B(j, k).imag();
      d.offdiag_imag_defect = std::max(
          d.offdiag_imag_defect,
          std::min(std::abs(im), std::abs(std::abs(im) - pi)));
    }
    d.b_diag_minus_2log_eps.push_back(sd.B(j, j).real() -
                                      2.0 * std::log(sd.eps / sd.a));
  }
  d.reality = reality_defect(sd.pairs);
  return d;
}

json spectral_to_json(const SpectralData& sd) {
  json pairs = json::array();
  for (int j = 0; j < sd.g; ++j) {
    const ResonantPair& p = sd.pairs[j];
    json E = json::array();
    for (const Complex& e : sd.branch_points[j].E) E.push_back(cjson(e));
    pairs.push_back({{"j", p.j},
                     {"mode", mode_json(p.mode)},
                     {"tau_1", cjson(p.tau_1)},
                     {"tau_2", cjson(p.tau_2)},
                     {"theta_angle", p.theta_angle},
                     {"phi_angle", p.phi_angle},
                     {"c_plus", cjson(p.c_plus)},
                     {"c_minus", cjson(p.c_minus)},
                     {"alpha", cjson(p.alpha)},
                     {"beta", cjson(p.beta)},
                     {"sqrt_alpha_beta", cjson(p.sqrt_alpha_beta)},
                     {"E", E}});
  }
  const SpectralDiagnostics d = diagnose(sd);
  json diag = {{"resonance_residual", d.resonance_residual},
               {"wt_sigma_relative_defect", d.wt_sigma_defect},
               {"alpha_beta_symmetry", d.alpha_beta_symmetry},
               {"reality_defect", d.reality},
               {"B_symmetry", d.b_symmetry},
               {"offdiag_imag_defect", d.offdiag_imag_defect},
               {"b_diag_minus_2log_eps", d.b_diag_minus_2log_eps}};
  if (sd.g > 0) diag["first_appearance_estimate"] = first_appearance_estimate(sd);
  return {{"schema", "ds2aw.spectrum/1"},
          {"g", sd.g},
          {"a", sd.a},
          {"L_x", sd.L_x},
          {"L_y", sd.L_y},
          {"eps", sd.eps},
          {"pairs", pairs},
          {"B", cmat(sd.B)},
          {"W_z", cvec(sd.W_z)},
          {"W_zbar", cvec(sd.W_zbar)},
          {"W_t", cvec(sd.W_t)},
          {"A_inf2", cvec(sd.A_inf2)},
          {"A_div", cvec(sd.A_div)},
          {"K", cvec(sd.K)},
          {"d", cvec(sd.d)},
          {"C0", cjson(sd.C0)},
          {"Cz", cjson(sd.Cz)},
          {"Czbar", cjson(sd.Czbar)},
          {"Ct", cjson(sd.Ct)},
          {"u00", cjson(sd.u00)},
          {"diagnostics", diag}};
}

json modes_to_json(const std::vector<Mode>& modes,
                   const GenericityReport& report) {
  json table = json::array();
  json classes = json::array();
  for (const Mode& m : modes) {
    table.push_back(mode_json(m));
    if (m.unstable && m.is_class_representative()) {
      classes.push_back({m.n_x, m.n_y});
    }
  }
  json on_circle = json::array();
  for (const Mode& m : report.on_circle_violations) {
    on_circle.push_back({m.n_x, m.n_y});
  }
  json marginal = json::array();
  for (const Mode& m : report.marginal_modes) marginal.push_back({m.n_x, m.n_y});
  json collisions = json::array();
  for (const ResonantCollision& c : report.multiplicity_violations) {
    collisions.push_back(
        {{"point", cjson(c.point)},
         {"modes",
          {{c.first_mode.first, c.first_mode.second},
           {c.second_mode.first, c.second_mode.second}}}});
  }
  return {{"modes", table},
          {"unstable_classes", classes},
          {"genericity",
           {{"ok", report.ok},
            {"on_circle_violations", on_circle},
            {"multiplicity_violations", collisions},
            {"marginal_modes", marginal}}}};
}

std::vector<SnapshotMetrics> compare_runs(const std::vector<Field>& first,
                                          const std::vector<Field>& second) {
  if (first.size() != second.size()) {
    throw Error(ErrorCode::TimeMismatch,
                "runs have " + std::to_string(first.size()) + " and " +
                    std::to_string(second.size()) + " snapshots");
  }
  std::vector<SnapshotMetrics> out;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const Field& f = first[i];
    const Field& s = second[i];
    if (f.nx != s.nx || f.ny != s.ny ||
        std::abs(f.L_x - s.L_x) > 1e-12 * std::max(1.0, s.L_x) ||
        std::abs(f.L_y - s.L_y) > 1e-12 * std::max(1.0, s.L_y)) {
      throw Error(ErrorCode::GridMismatch,
                  "snapshot " + std::to_string(i) + " grids differ");
    }
    if (std::abs(f.t - s.t) > 1e-12 * std::max(1.0, std::abs(s.t))) {
      throw Error(ErrorCode::TimeMismatch,
                  "snapshot " + std::to_string(i) + " times differ");
    }
    double diff2 = 0.0, ref2 = 0.0, diff_inf = 0.0;
    SnapshotMetrics m;
    m.t = s.t;
    for (std::size_t k = 0; k < f.u.size(); ++k) {
      const double e = std::abs(f.u[k] - s.u[k]);
      diff2 += e * e;
      ref2 += std::norm(s.u[k]);
      diff_inf = std::max(diff_inf, e);
      m.max_abs_first = std::max(m.max_abs_first, std::abs(f.u[k]));
      m.max_abs_second = std::max(m.max_abs_second, std::abs(s.u[k]));
    }
    m.rel_l2 = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
    m.rel_linf = m.max_abs_second > 0.0 ? diff_inf / m.max_abs_second : diff_inf;
    out.push_back(m);
  }
  return out;
}

json metrics_to_json(const std::vector<SnapshotMetrics>& metrics) {
  json rows = json::array();
  double worst_l2 = 0.0, worst_linf = 0.0;
  for (const SnapshotMetrics& m : metrics) {
    rows.push_back({{"t", m.t},
                    {"rel_l2", m.rel_l2},
                    {"rel_linf", m.rel_linf},
                    {"max_abs_fg", m.max_abs_first},
                    {"max_abs_ref", m.max_abs_second}});
    worst_l2 = std::max(worst_l2, m.rel_l2);
    worst_linf = std::max(worst_linf, m.rel_linf);
  }
  return {{"schema", "ds2aw.compare/1"},
          {"snapshots", rows},
          {"max_rel_l2", worst_l2},
          {"max_rel_linf", worst_linf}};
}

}  // namespace ds2aw
