#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ds2aw {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr int kMaxThetaRadius = 64;

// theta(z|B) = sum_n exp(1/2 n^T B n + n^T z), with a-periods 2*pi*i. The
// series is cut to |n_j| <= truncation_radius. With adaptive set, evaluators
// that own the parameters may raise the radius when the tail check fails.
struct ThetaParams {
  CMatrix B;
  int truncation_radius = 1;
  double tail_tolerance = 1e-12;
  bool adaptive = false;

  int g() const { return static_cast<int>(B.rows()); }
};

// Validated theta series. Genus 0 is allowed and evaluates to 1.
class ThetaFunction {
 public:
  explicit ThetaFunction(ThetaParams params);

  const ThetaParams& params() const { return params_; }
  int genus() const { return params_.g(); }
  double lambda_min() const { return lambda_min_; }

  // Checked evaluation at the configured radius.
  Complex operator()(const CVector& z) const;
  Complex operator()(const CVector& z, int radius) const;

  // Plain lattice sum, lexicographic order, compensated.
  Complex partial_sum(const CVector& z, int radius) const;

  // Certified bound on the modulus of the dropped terms |n|_inf > radius.
  double tail_bound(const RVector& re_z, int radius) const;

  // Smallest radius whose tail bound is below rel_tol times the Gaussian
  // envelope exp(1/2 c^T (-Re B)^{-1} c) at c = re_z.
  int radius_for(const RVector& re_z, double rel_tol) const;

 private:
  ThetaParams params_;
  RMatrix neg_re_b_;
  Eigen::LLT<RMatrix> llt_;
  double lambda_min_ = 0.0;
};

// Throws not-negative-definite or invalid-argument.
void validate(const ThetaParams& params);

Complex theta(const CVector& z, const ThetaParams& params);

// Smallest radius M (1..64) such that the tail bound, uniform over
// |Re z_j| <= z_domain_bound, is below tol. Throws radius-overflow.
int adaptive_radius(const CMatrix& B, double z_domain_bound, double tol);

// |theta(z + B e_k) - exp(-b_kk/2 - z_k) theta(z)| / |theta(z)| with both
// sides as plain partial sums at the configured radius.
double quasi_periodicity_residual(const CVector& z, int k,
                                  const ThetaParams& params);

}  // namespace ds2aw
