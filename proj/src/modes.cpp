#include "ds2aw/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ds2aw/error.hpp"

namespace ds2aw {

namespace {

void check_periods(double L_x, double L_y) {
  if (!(L_x > 0.0) || !(L_y > 0.0) || !std::isfinite(L_x) ||
      !std::isfinite(L_y)) {
    throw Error(ErrorCode::InvalidPeriod,
                "periods must be positive and finite, got L_x=" +
                    std::to_string(L_x) + " L_y=" + std::to_string(L_y));
  }
}

void check_radius(double L_x, double L_y, double a, int search_radius) {
  const int needed = min_search_radius(L_x, L_y, a);
  if (search_radius < needed) {
    throw Error(ErrorCode::InvalidArgument,
                "search_radius " + std::to_string(search_radius) +
                    " does not cover the instability disk (need " +
                    std::to_string(needed) + ")");
  }
}

// Resonant points of a mode at unit background: tau_2 - tau_1 = kappa and
// 1/tau_2 - 1/tau_1 = conj(kappa). The two solutions are (tau_1, tau_2) and
// (-tau_2, -tau_1).
std::pair<Complex, Complex> resonance_solution(double k_x, double k_y) {
  const Complex kappa(k_x, k_y);
  const double k2 = k_x * k_x + k_y * k_y;
  const Complex root = std::sqrt(Complex(1.0 - 4.0 / k2, 0.0));
  const Complex tau_1 = 0.5 * kappa * (-1.0 + root);
  return {tau_1, tau_1 + kappa};
}

}  // namespace

Complex growth_rate(double k_x, double k_y, double a) {
  if (k_x == 0.0 && k_y == 0.0) {
    throw Error(ErrorCode::ZeroWavevector, "growth rate of the zero mode");
  }
  const double k2 = k_x * k_x + k_y * k_y;
  const double anisotropy = k_x * k_x - k_y * k_y;
  const double radicand = 4.0 * a * a - k2;
  const double k = std::sqrt(k2);
  if (radicand >= 0.0) {
    return {anisotropy * std::sqrt(radicand) / k, 0.0};
  }
  return {0.0, std::abs(anisotropy) * std::sqrt(-radicand) / k};
}

int min_search_radius(double L_x, double L_y, double a) {
  return static_cast<int>(
      std::ceil(std::max(L_x, L_y) * std::abs(a) / std::numbers::pi));
}

Mode make_mode(int n_x, int n_y, double L_x, double L_y, double a) {
  check_periods(L_x, L_y);
  Mode m;
  m.n_x = n_x;
  m.n_y = n_y;
  m.k_x = n_x * 2.0 * std::numbers::pi / L_x;
  m.k_y = n_y * 2.0 * std::numbers::pi / L_y;
  m.sigma = growth_rate(m.k_x, m.k_y, a);
  m.unstable = m.k2() < 4.0 * a * a && !is_marginal(m, a);
  return m;
}

bool is_marginal(const Mode& mode, double a) {
  const double kx2 = mode.k_x * mode.k_x;
  const double ky2 = mode.k_y * mode.k_y;
  return mode.k2() < 4.0 * a * a && std::abs(kx2 - ky2) <= 1e-12 * (kx2 + ky2);
}

std::vector<Mode> enumerate_modes(double L_x, double L_y, double a,
                                  int search_radius) {
  check_periods(L_x, L_y);
  check_radius(L_x, L_y, a, search_radius);
  std::vector<Mode> modes;
  const int r = search_radius;
  modes.reserve(static_cast<std::size_t>((2 * r + 1) * (2 * r + 1)));
  for (int n_x = -r; n_x <= r; ++n_x) {
    for (int n_y = -r; n_y <= r; ++n_y) {
      if (n_x == 0 && n_y == 0) continue;
      modes.push_back(make_mode(n_x, n_y, L_x, L_y, a));
    }
  }
  return modes;
}

std::vector<Mode> unstable_classes(const std::vector<Mode>& modes) {
  std::vector<Mode> out;
  for (const Mode& m : modes) {
    if (m.unstable && m.is_class_representative()) out.push_back(m);
  }
  return out;
}

GenericityReport check_genericity(double L_x, double L_y, double a,
                                  int search_radius) {
  GenericityReport report;
  const std::vector<Mode> modes = enumerate_modes(L_x, L_y, a, search_radius);

  struct Point {
    Complex tau;
    std::size_t owner;
  };
  std::vector<Point> points;
  std::vector<const Mode*> owners;

  for (const Mode& m : modes) {
    if (std::abs(m.k2() - 4.0 * a * a) < kCircleTolerance * a * a) {
      report.on_circle_violations.push_back(m);
    }
    if (is_marginal(m, a)) report.marginal_modes.push_back(m);
    if (!m.is_class_representative()) continue;
    // Multiplier space is compared at unit background.
    const auto [t1, t2] = resonance_solution(m.k_x / a, m.k_y / a);
    const std::size_t id = owners.size();
    owners.push_back(&m);
    for (Complex p : {t1, t2, -t1, -t2}) points.push_back({p, id});
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].owner == points[j].owner) continue;
      if (std::abs(points[i].tau - points[j].tau) < kCollisionTolerance) {
        const Mode& p = *owners[points[i].owner];
        const Mode& q = *owners[points[j].owner];
        report.multiplicity_violations.push_back(
            {points[i].tau, {p.n_x, p.n_y}, {q.n_x, q.n_y}});
      }
    }
  }

  report.ok = report.on_circle_violations.empty() &&
              report.multiplicity_violations.empty() &&
              report.marginal_modes.empty();
  return report;
}

}  // namespace ds2aw
