#include "ds2aw/theta.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ds2aw/error.hpp"

namespace ds2aw {

namespace {

// Neumaier summation, one accumulator per component.
struct CompensatedSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  double value() const { return s + c; }
};

// Half-width in lattice steps beyond which exp(-lambda/2 m^2) underflows.
long gaussian_reach(double lambda) {
  return static_cast<long>(std::ceil(std::sqrt(1500.0 / lambda))) + 2;
}

// Sum over integers m with |m| > skip of exp(-lambda/2 dist(m, [lo, hi])^2).
// skip < 0 keeps every m.
double lattice_gaussian(double lo, double hi, double lambda, long skip) {
  const long reach = gaussian_reach(lambda);
  const long first = static_cast<long>(std::floor(lo)) - reach;
  const long last = static_cast<long>(std::ceil(hi)) + reach;
  double sum = 0.0;
  for (long m = first; m <= last; ++m) {
    if (skip >= 0 && std::labs(m) <= skip) continue;
    const double x = static_cast<double>(m);
    const double dist = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
    sum += std::exp(-0.5 * lambda * dist * dist);
  }
  return sum;
}

// sum_j T_j prod_{i != j} S_i, the union bound over the coordinate that
// leaves the box.
double union_tail(const std::vector<double>& T, const std::vector<double>& S) {
  double total = 0.0;
  for (std::size_t j = 0; j < T.size(); ++j) {
    double term = T[j];
    for (std::size_t i = 0; i < S.size(); ++i) {
      if (i != j) term *= S[i];
    }
    total += term;
  }
  return total;
}

struct Spectrum {
  RMatrix neg_re_b;
  Eigen::LLT<RMatrix> llt;
  double lambda_min;
};

Spectrum analyse(const ThetaParams& params) {
  const CMatrix& B = params.B;
  if (B.rows() != B.cols()) {
    throw Error(ErrorCode::InvalidArgument, "theta: B must be square");
  }
  if (params.truncation_radius < 1 ||
      params.truncation_radius > kMaxThetaRadius) {
    throw Error(ErrorCode::InvalidArgument,
                "theta: truncation radius must lie in [1, 64], got " +
                    std::to_string(params.truncation_radius));
  }
  if (!(params.tail_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "theta: tail tolerance must be positive");
  }
  Spectrum out;
  out.lambda_min = 0.0;
  if (B.rows() == 0) return out;
  if (!B.allFinite()) {
    throw Error(ErrorCode::NotNegativeDefinite, "theta: B is not finite");
  }
  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::InvalidArgument, "theta: B is not symmetric");
  }
  out.neg_re_b = -B.real();
  out.neg_re_b = 0.5 * (out.neg_re_b + out.neg_re_b.transpose()).eval();
  out.llt.compute(out.neg_re_b);
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(out.neg_re_b,
                                             Eigen::EigenvaluesOnly);
  out.lambda_min = eig.eigenvalues().minCoeff();
  if (out.llt.info() != Eigen::Success || !(out.lambda_min > 0.0)) {
    throw Error(ErrorCode::NotNegativeDefinite,
                "theta: Re B is not negative definite (largest eigenvalue " +
                    std::to_string(-out.lambda_min) + ")");
  }
  return out;
}

}  // namespace

void validate(const ThetaParams& params) { analyse(params); }

ThetaFunction::ThetaFunction(ThetaParams params) : params_(std::move(params)) {
  Spectrum s = analyse(params_);
  neg_re_b_ = std::move(s.neg_re_b);
  llt_ = std::move(s.llt);
  lambda_min_ = s.lambda_min;
}

Complex ThetaFunction::partial_sum(const CVector& z, int radius) const {
  const int g = genus();
  if (z.size() != g) {
    throw Error(ErrorCode::InvalidArgument,
                "theta: argument has " + std::to_string(z.size()) +
                    " components, genus is " + std::to_string(g));
  }
  if (g == 0) return 1.0;
  const CMatrix& B = params_.B;
  const int M = radius;
  const int width = 2 * M + 1;

  // half_diag[l][m + M] = b_ll m^2 / 2
  std::vector<Complex> half_diag(static_cast<std::size_t>(g) * width);
  for (int l = 0; l < g; ++l) {
    for (int m = -M; m <= M; ++m) {
      half_diag[static_cast<std::size_t>(l) * width + (m + M)] =
          0.5 * B(l, l) * static_cast<double>(m) * static_cast<double>(m);
    }
  }

  // cross[l][k] = sum_{j<l} b_jk n_j for k >= l, one row per depth.
  std::vector<Complex> cross(static_cast<std::size_t>(g + 1) * g, 0.0);
  CompensatedSum re;
  CompensatedSum im;

  // Depth-first walk over n_0, ..., n_{g-1}; lexicographic order with n_0
  // outermost. The exponent is built incrementally from the fixed prefix.
  auto walk = [&](auto&& self, int l, Complex prefix) -> void {
    const Complex* h = &cross[static_cast<std::size_t>(l) * g];
    const Complex linear = h[l] + z[l];
    const Complex* hd = &half_diag[static_cast<std::size_t>(l) * width];
    if (l == g - 1) {
      for (int m = -M; m <= M; ++m) {
        const Complex e = std::exp(prefix + static_cast<double>(m) * linear +
                                   hd[m + M]);
        re.add(e.real());
        im.add(e.imag());
      }
      return;
    }
    Complex* next = &cross[static_cast<std::size_t>(l + 1) * g];
    for (int m = -M; m <= M; ++m) {
      const double md = static_cast<double>(m);
      for (int k = l + 1; k < g; ++k) next[k] = h[k] + B(l, k) * md;
      self(self, l + 1, prefix + md * linear + hd[m + M]);
    }
  };
  walk(walk, 0, Complex(0.0, 0.0));
  return {re.value(), im.value()};
}

double ThetaFunction::tail_bound(const RVector& re_z, int radius) const {
  const int g = genus();
  if (g == 0) return 0.0;
  const RVector center = llt_.solve(re_z);
  const double log_envelope = 0.5 * re_z.dot(center);
  std::vector<double> T(g);
  std::vector<double> S(g);
  for (int j = 0; j < g; ++j) {
    T[j] = lattice_gaussian(center[j], center[j], lambda_min_, radius);
    S[j] = lattice_gaussian(center[j], center[j], lambda_min_, -1);
  }
  return std::exp(log_envelope) * union_tail(T, S);
}

int ThetaFunction::radius_for(const RVector& re_z, double rel_tol) const {
  const int g = genus();
  if (g == 0) return 1;
  const RVector center = llt_.solve(re_z);
  std::vector<double> S(g);
  for (int j = 0; j < g; ++j) {
    S[j] = lattice_gaussian(center[j], center[j], lambda_min_, -1);
  }
  std::vector<double> T(g);
  for (int M = 1; M <= kMaxThetaRadius; ++M) {
    for (int j = 0; j < g; ++j) {
      T[j] = lattice_gaussian(center[j], center[j], lambda_min_, M);
    }
    if (union_tail(T, S) <= rel_tol) return M;
  }
  throw Error(ErrorCode::RadiusOverflow,
              "theta: no truncation radius up to 64 meets the tolerance");
}

Complex ThetaFunction::operator()(const CVector& z) const {
  return (*this)(z, params_.truncation_radius);
}

Complex ThetaFunction::operator()(const CVector& z, int radius) const {
  const Complex sum = partial_sum(z, radius);
  if (genus() == 0) return sum;
  const double bound = tail_bound(z.real(), radius);
  if (!(bound <= params_.tail_tolerance * std::abs(sum))) {
    throw Error(ErrorCode::TruncationInsufficient,
                "theta: tail bound " + std::to_string(bound) +
                    " exceeds tolerance at radius " + std::to_string(radius) +
                    " (|partial sum| = " + std::to_string(std::abs(sum)) +
                    ")");
  }
  return sum;
}

Complex theta(const CVector& z, const ThetaParams& params) {
  return ThetaFunction(params)(z);
}

int adaptive_radius(const CMatrix& B, double z_domain_bound, double tol) {
  ThetaParams params;
  params.B = B;
  const Spectrum s = analyse(params);
  if (!(tol > 0.0) || !(z_domain_bound >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "adaptive_radius: need tol > 0 and a non-negative bound");
  }
  const int g = static_cast<int>(B.rows());
  if (g == 0) return 1;
  // |n*| = |(-Re B)^{-1} Re z| <= R / lambda_min along every axis.
  const double rho = z_domain_bound / s.lambda_min;
  const std::vector<double> S(
      g, lattice_gaussian(-rho, rho, s.lambda_min, -1));
  for (int M = 1; M <= kMaxThetaRadius; ++M) {
    const std::vector<double> T(
        g, lattice_gaussian(-rho, rho, s.lambda_min, M));
    if (union_tail(T, S) < tol) return M;
  }
  throw Error(ErrorCode::RadiusOverflow,
              "adaptive_radius: tolerance not reachable with radius <= 64");
}

double quasi_periodicity_residual(const CVector& z, int k,
                                  const ThetaParams& params) {
  ThetaFunction th(params);
  if (k < 0 || k >= th.genus()) {
    throw Error(ErrorCode::InvalidArgument,
                "quasi_periodicity_residual: index out of range");
  }
  const int M = params.truncation_radius;
  const Complex base = th.partial_sum(z, M);
  if (std::abs(base) < 1e-300) {
    throw Error(ErrorCode::DivisionByZeroTheta,
                "quasi_periodicity_residual: theta(z) vanishes");
  }
  const CVector shifted = z + params.B.col(k);
  const Complex lhs = th.partial_sum(shifted, M);
  const Complex rhs = std::exp(-0.5 * params.B(k, k) - z[k]) * base;
  return std::abs(lhs - rhs) / std::abs(base);
}

}  // namespace ds2aw
