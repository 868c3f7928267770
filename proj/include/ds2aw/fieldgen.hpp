#pragma once

#include <span>
#include <vector>

#include "ds2aw/curve.hpp"
#include "ds2aw/field.hpp"
#include "ds2aw/theta.hpp"

namespace ds2aw {

// Leading-order finite-gap solution
//   u = exp(z Cz + zbar Czbar + t Ct)
//       * theta(A + w + d) theta(d) / (theta(A + d) theta(w + d)) * u00,
// w = W_z z + W_zbar zbar + W_t t, evaluated in unit-background variables.
class FiniteGapSolution {
 public:
  FiniteGapSolution(SpectralData sd, ThetaParams params);

  Complex operator()(double x, double y, double t) const;

  const SpectralData& spectral_data() const { return sd_; }
  const ThetaFunction& theta_function() const { return theta_; }

 private:
  Complex evaluate(const CVector& w, double t_scaled) const;
  Complex checked_theta(const CVector& z, int radius) const;
  int start_radius(double t_scaled) const;

  SpectralData sd_;
  ThetaFunction theta_;
  Complex theta_d_;
  Complex theta_ad_;
};

// Theta parameters for the curve: B from sd, radius chosen from the real
// parts reached over the given times, escalated on demand.
ThetaParams adaptive_theta_params(const SpectralData& sd,
                                  std::span<const double> times,
                                  double tail_tol);

Complex evaluate_u(double x, double y, double t, const SpectralData& sd,
                   const ThetaParams& params);

// threads <= 0 uses the hardware concurrency.
std::vector<Field> evaluate_grid(std::span<const double> times, int nx, int ny,
                                 const SpectralData& sd,
                                 const ThetaParams& params, int threads = 1);

std::vector<Field> evaluate_grid(std::span<const double> times, int nx, int ny,
                                 const FiniteGapSolution& solution,
                                 int threads = 1);

// T1 = log(1/(eps C)) / sigma_max, C = max |sqrt(alpha beta)|.
double first_appearance_estimate(const SpectralData& sd);

}  // namespace ds2aw
