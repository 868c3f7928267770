#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "ds2aw/field.hpp"
#include "ds2aw/modes.hpp"
#include "ds2aw/theta.hpp"

namespace ds2aw {

// Two points of the unperturbed curve with equal multipliers. The handle that
// opens between them under perturbation is controlled by alpha, beta.
struct ResonantPair {
  int j = 0;  // 1-based after ordering
  Complex tau_1;
  Complex tau_2;
  double theta_angle = 0.0;
  double phi_angle = 0.0;
  Mode mode;
  // Fourier coefficients of exp(+i k.x) and exp(-i k.x) for this pair's k.
  Complex c_plus;
  Complex c_minus;
  Complex alpha;
  Complex beta;
  Complex sqrt_alpha_beta;
};

struct BranchPoints {
  std::array<Complex, 4> E;
};

struct SpectralData {
  int g = 0;
  double a = 1.0;    // background of the original problem
  double L_x = 0.0;  // original periods
  double L_y = 0.0;
  double eps = 0.0;  // original amplitude; curve data live at unit background
  std::vector<ResonantPair> pairs;
  std::vector<BranchPoints> branch_points;
  CMatrix B;
  CVector W_z;
  CVector W_zbar;
  CVector W_t;
  CVector A_inf2;
  CVector A_div;
  CVector K;
  CVector d;
  Complex C0;
  Complex Cz;
  Complex Czbar;
  Complex Ct;
  Complex u00;
};

// Map to unit background: X = a x, Y = a y, T = a^2 t, u = a U.
struct Rescaling {
  double a = 1.0;
  double L_x = 0.0;  // scaled periods
  double L_y = 0.0;
  double eps = 0.0;  // scaled amplitude; v0 samples are unchanged
  double time_scale = 1.0;

  double scaled_x(double x) const { return a * x; }
  double scaled_t(double t) const { return time_scale * t; }
  double original_x(double X) const { return X / a; }
  double original_t(double T) const { return T / time_scale; }
  Complex scaled_u(Complex u) const { return u / a; }
  Complex original_u(Complex U) const { return a * U; }
};

Rescaling rescale(double a, double L_x, double L_y, double eps);

// The pair of an unstable mode at unit background and its negative, whose
// own mode is -k.
std::pair<ResonantPair, ResonantPair> resonant_pair(const Mode& mode);

// Diagnostic only: (tau_1, tau_2) for a stable mode, k^2 > 4.
std::pair<Complex, Complex> stable_resonant_pair(const Mode& mode);

std::vector<ResonantPair> order_pairs(std::vector<ResonantPair> pairs);

// Coefficients (c_k, c_{-k}) of v0 = sum_n c_n exp(i k_n.x).
std::pair<Complex, Complex> perturbation_coefficients(const Field& v0,
                                                      const Mode& mode,
                                                      int search_radius);

// Fills alpha, beta and sqrt_alpha_beta of the pair; returns (alpha, beta).
std::pair<Complex, Complex> alpha_beta(ResonantPair& pair, Complex c_j,
                                       Complex c_minus_j);

BranchPoints branch_points(const ResonantPair& pair, double eps);

CMatrix period_matrix(const std::vector<ResonantPair>& pairs, double eps);

struct FrequencyVectors {
  CVector W_z;
  CVector W_zbar;
  CVector W_t;
};

FrequencyVectors frequency_vectors(const std::vector<ResonantPair>& pairs);

CVector abel_infinity(const std::vector<ResonantPair>& pairs);

// A_j(E_{4j-3}) at leading order.
Complex abel_branch_point(const ResonantPair& pair, double eps);

struct DivisorData {
  CVector A_div;
  CVector K;
  CVector d;
};

DivisorData divisor_and_constants(const std::vector<ResonantPair>& pairs,
                                  const CMatrix& B, double eps);

// Largest deviation of alpha_j tau_{2j-1}/tau_{2j} from -conj(alpha_{j+N})
// over the first half of the ordered pairs, relative to |alpha_j|.
double reality_defect(const std::vector<ResonantPair>& pairs);

// v0 is sampled on the original periods (its L_x, L_y are used) with zero
// mean. search_radius defaults to the smallest radius covering the disk.
SpectralData build_spectral_data(double L_x, double L_y, double eps,
                                 const Field& v0, double a,
                                 std::optional<int> search_radius = {});

}  // namespace ds2aw
