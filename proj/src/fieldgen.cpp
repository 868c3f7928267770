#include "ds2aw/fieldgen.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "ds2aw/error.hpp"

namespace ds2aw {

namespace {

constexpr Complex kI(0.0, 1.0);

std::string where(double x, double y, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "at (x, y, t) = (" << x << ", " << y << ", " << t << ")";
  return os.str();
}

ThetaParams checked_params(const SpectralData& sd, ThetaParams params) {
  if (params.B.rows() != sd.g || params.B.cols() != sd.g) {
    throw Error(ErrorCode::InvalidArgument,
                "theta parameters do not match the curve genus");
  }
  if (sd.g > 0) {
    const double scale = std::max(1.0, sd.B.cwiseAbs().maxCoeff());
    if ((params.B - sd.B).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw Error(ErrorCode::InvalidArgument,
                  "theta parameters carry a different period matrix");
    }
  }
  return params;
}

}  // namespace

FiniteGapSolution::FiniteGapSolution(SpectralData sd, ThetaParams params)
    : sd_(std::move(sd)), theta_(checked_params(sd_, std::move(params))) {
  const int M = start_radius(0.0);
  theta_d_ = checked_theta(sd_.d, M);
  theta_ad_ = checked_theta(sd_.A_inf2 + sd_.d, M);
  if (std::abs(theta_d_) < 1e-300 || std::abs(theta_ad_) < 1e-300) {
    throw Error(ErrorCode::ThetaZero,
                "theta vanishes at the normalization point");
  }
}

int FiniteGapSolution::start_radius(double t_scaled) const {
  const ThetaParams& p = theta_.params();
  if (!p.adaptive || sd_.g == 0) return p.truncation_radius;
  const RVector c = sd_.d.real() + sd_.W_t.real() * t_scaled;
  return std::max(p.truncation_radius, theta_.radius_for(c, p.tail_tolerance));
}

Complex FiniteGapSolution::checked_theta(const CVector& z, int radius) const {
  if (!theta_.params().adaptive) return theta_(z, radius);
  for (int M = radius;; ++M) {
    try {
      return theta_(z, M);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TruncationInsufficient ||
          M >= kMaxThetaRadius) {
        throw;
      }
    }
  }
}

Complex FiniteGapSolution::evaluate(const CVector& w, double t_scaled) const {
  const int M = start_radius(t_scaled);
  const Complex num = checked_theta(sd_.A_inf2 + w + sd_.d, M);
  const Complex den = checked_theta(w + sd_.d, M);
  if (std::abs(den) < 1e-300) {
    throw Error(ErrorCode::ThetaZero, "theta(w + d) vanishes");
  }
  return num * theta_d_ / (theta_ad_ * den);
}

Complex FiniteGapSolution::operator()(double x, double y, double t) const {
  const double a = sd_.a;
  const Complex z(a * x, a * y);
  const double t_scaled = a * a * t;
  const CVector w = sd_.W_z * z + sd_.W_zbar * std::conj(z) +
                    sd_.W_t * t_scaled;
  Complex ratio;
  try {
    ratio = sd_.g == 0 ? Complex(1.0) : evaluate(w, t_scaled);
  } catch (const Error& e) {
    throw Error(e.code(), std::string(e.what()) + " " + where(x, y, t));
  }
  const Complex gauge =
      std::exp(z * sd_.Cz + std::conj(z) * sd_.Czbar + t_scaled * sd_.Ct);
  return gauge * ratio * sd_.u00;
}

ThetaParams adaptive_theta_params(const SpectralData& sd,
                                  std::span<const double> times,
                                  double tail_tol) {
  ThetaParams params;
  params.B = sd.B;
  params.tail_tolerance = tail_tol;
  params.adaptive = true;
  params.truncation_radius = 1;
  if (sd.g == 0) return params;
  const ThetaFunction probe(params);
  const double t2 = sd.a * sd.a;
  int M = probe.radius_for(sd.d.real(), tail_tol);
  for (double t : times) {
    const RVector c = sd.d.real() + sd.W_t.real() * (t2 * t);
    M = std::max(M, probe.radius_for(c, tail_tol));
  }
  params.truncation_radius = M;
  return params;
}

Complex evaluate_u(double x, double y, double t, const SpectralData& sd,
                   const ThetaParams& params) {
  return FiniteGapSolution(sd, params)(x, y, t);
}

std::vector<Field> evaluate_grid(std::span<const double> times, int nx, int ny,
                                 const SpectralData& sd,
                                 const ThetaParams& params, int threads) {
  return evaluate_grid(times, nx, ny, FiniteGapSolution(sd, params), threads);
}

std::vector<Field> evaluate_grid(std::span<const double> times, int nx, int ny,
                                 const FiniteGapSolution& solution,
                                 int threads) {
  if (nx < 8 || ny < 8) {
    throw Error(ErrorCode::InvalidArgument, "grid must be at least 8x8");
  }
  const SpectralData& sd = solution.spectral_data();
  std::vector<Field> out;
  out.reserve(times.size());
  for (double t : times) out.emplace_back(sd.L_x, sd.L_y, nx, ny, t);

  // Work items are (time, row); each worker takes every n-th item.
  const std::size_t items = times.size() * static_cast<std::size_t>(ny);
  unsigned workers =
      threads > 0 ? static_cast<unsigned>(threads)
                  : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, std::max<std::size_t>(items, 1)));

  struct Failure {
    std::size_t index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;
  };
  std::vector<Failure> failures(workers);

  auto run = [&](unsigned w) {
    for (std::size_t item = w; item < items; item += workers) {
      Field& f = out[item / ny];
      const int iy = static_cast<int>(item % ny);
      try {
        for (int ix = 0; ix < nx; ++ix) {
          f.at(ix, iy) = solution(f.x(ix), f.y(iy), f.t);
        }
      } catch (...) {
        failures[w] = {item, std::current_exception()};
        return;
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (std::thread& th : pool) th.join();
  }
  // The earliest failing item is each worker's first, so this is the same
  // error a serial run reports.
  const auto first = std::min_element(
      failures.begin(), failures.end(),
      [](const Failure& p, const Failure& q) { return p.index < q.index; });
  if (first != failures.end() && first->error) {
    std::rethrow_exception(first->error);
  }
  return out;
}

double first_appearance_estimate(const SpectralData& sd) {
  if (sd.g == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "first appearance needs at least one resonant pair");
  }
  double sigma = 0.0;
  double C = 0.0;
  for (int j = 0; j < sd.g; ++j) {
    sigma = std::max(sigma, std::abs(sd.W_t[j]));
    C = std::max(C, std::abs(sd.pairs[j].sqrt_alpha_beta));
  }
  const double eps_scaled = sd.eps / sd.a;
  return std::log(1.0 / (eps_scaled * C)) / sigma / (sd.a * sd.a);
}

}  // namespace ds2aw
