#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace ds2aw {

using Complex = std::complex<double>;

// One Fourier harmonic exp(i(k_x x + k_y y)) of a perturbation on the
// L_x x L_y torus, with its linearized eigenvalue over the background a.
struct Mode {
  int n_x = 0;
  int n_y = 0;
  double k_x = 0.0;
  double k_y = 0.0;
  Complex sigma;
  bool unstable = false;

  double k2() const { return k_x * k_x + k_y * k_y; }
  Mode negated() const {
    return Mode{-n_x, -n_y, -k_x, -k_y, sigma, unstable};
  }
  // Representative of the {k, -k} class: n_x > 0, or n_x == 0 and n_y > 0.
  bool is_class_representative() const {
    return n_x > 0 || (n_x == 0 && n_y > 0);
  }
};

// Two distinct resonant pairs sharing a point of the unperturbed curve, i.e.
// a multiplier value with more than two preimages.
struct ResonantCollision {
  Complex point;
  std::pair<int, int> first_mode;
  std::pair<int, int> second_mode;
};

struct GenericityReport {
  std::vector<Mode> on_circle_violations;
  std::vector<ResonantCollision> multiplicity_violations;
  std::vector<Mode> marginal_modes;
  bool ok = true;
};

inline constexpr double kCircleTolerance = 1e-9;
inline constexpr double kCollisionTolerance = 1e-9;

// sigma = (kx^2 - ky^2) sqrt(4a^2 - k^2) / |k|. Inside the disk the value is
// real and carries the sign of kx^2 - ky^2; outside it is i|..| with Im >= 0.
Complex growth_rate(double k_x, double k_y, double a);

// Smallest search radius covering the instability disk k^2 < 4a^2.
int min_search_radius(double L_x, double L_y, double a);

Mode make_mode(int n_x, int n_y, double L_x, double L_y, double a);

// All harmonics with |n_x|, |n_y| <= search_radius except (0,0), sorted by
// (n_x, n_y).
std::vector<Mode> enumerate_modes(double L_x, double L_y, double a,
                                  int search_radius);

// One representative per unstable {k, -k} class, in enumeration order.
std::vector<Mode> unstable_classes(const std::vector<Mode>& modes);

bool is_marginal(const Mode& mode, double a);

GenericityReport check_genericity(double L_x, double L_y, double a,
                                  int search_radius);

}  // namespace ds2aw
