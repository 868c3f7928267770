#include "ds2aw/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "ds2aw/error.hpp"

namespace ds2aw {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI(0.0, 1.0);

double wrap_angle(double x) {
  // Into (-pi, pi].
  double w = std::remainder(x, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

// Clockwise angular distance from `from` to `to`, in [0, 2pi).
double clockwise(double from, double to) {
  double d = std::fmod(from - to, 2.0 * kPi);
  if (d < 0.0) d += 2.0 * kPi;
  return d;
}

std::string pair_label(const ResonantPair& p) {
  std::ostringstream os;
  os << "pair " << p.j << " (mode " << p.mode.n_x << "," << p.mode.n_y << ")";
  return os.str();
}

template <class F>
auto with_pair_context(const ResonantPair& p, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), pair_label(p) + ": " + e.what());
  }
}

// Im(tau_2 conj(tau_1)), the sine of the angle between the two points.
double cross_im(const ResonantPair& p) {
  return (p.tau_2 * std::conj(p.tau_1)).imag();
}

}  // namespace

Rescaling rescale(double a, double L_x, double L_y, double eps) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::InvalidArgument, "background a must be positive");
  }
  Rescaling r;
  r.a = a;
  r.L_x = L_x * a;
  r.L_y = L_y * a;
  r.eps = eps / a;
  r.time_scale = a * a;
  return r;
}

std::pair<ResonantPair, ResonantPair> resonant_pair(const Mode& mode) {
  if (!mode.unstable) {
    throw Error(ErrorCode::WrongClass,
                "resonant_pair needs an unstable mode, got (" +
                    std::to_string(mode.n_x) + "," +
                    std::to_string(mode.n_y) + ")");
  }
  const Complex kappa(mode.k_x, mode.k_y);
  const double k2 = mode.k2();
  const double k = std::sqrt(k2);
  // The root +i r is the one with Im(tau_1/tau_2) = 2r/(1+r^2) > 0.
  const double r = std::sqrt(std::max(0.0, 4.0 - k2)) / k;
  ResonantPair p;
  p.mode = mode;
  p.tau_1 = 0.5 * kappa * Complex(-1.0, r);
  p.tau_2 = p.tau_1 + kappa;
  p.theta_angle = std::atan2(mode.k_y, mode.k_x);
  p.phi_angle = std::acos(std::min(1.0, 0.5 * k));
  if (std::abs(p.tau_1.imag()) < 1e-9 || std::abs(p.tau_2.imag()) < 1e-9) {
    throw Error(ErrorCode::DegeneratePair,
                "resonant point on the real axis for mode (" +
                    std::to_string(mode.n_x) + "," +
                    std::to_string(mode.n_y) + ")");
  }
  ResonantPair q = p;
  q.mode = mode.negated();
  q.tau_1 = -p.tau_1;
  q.tau_2 = -p.tau_2;
  q.theta_angle = wrap_angle(p.theta_angle + kPi);
  return {p, q};
}

std::pair<Complex, Complex> stable_resonant_pair(const Mode& mode) {
  const double k2 = mode.k2();
  if (mode.unstable || k2 <= 4.0) {
    throw Error(ErrorCode::WrongClass,
                "stable_resonant_pair needs k^2 > 4, got (" +
                    std::to_string(mode.n_x) + "," +
                    std::to_string(mode.n_y) + ")");
  }
  const Complex kappa(mode.k_x, mode.k_y);
  const Complex tau_1 = 0.5 * kappa * (-1.0 + std::sqrt((k2 - 4.0) / k2));
  return {tau_1, -1.0 / std::conj(tau_1)};
}

std::vector<ResonantPair> order_pairs(std::vector<ResonantPair> pairs) {
  std::vector<Complex> points;
  for (const ResonantPair& p : pairs) {
    points.push_back(p.tau_1);
    points.push_back(p.tau_2);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = i + 1; k < points.size(); ++k) {
      if (std::abs(points[i] - points[k]) < 1e-9) {
        throw Error(ErrorCode::DuplicatePoint,
                    "two resonant pairs share a point");
      }
    }
  }
  if (pairs.empty()) return pairs;

  // Start: the pair whose mid-direction arg(tau_1 + tau_2) is met first when
  // sweeping clockwise from just below pi. A direction exactly at pi is met
  // last.
  auto start_key = [](const ResonantPair& p) {
    const double d = clockwise(kPi, std::arg(p.tau_1 + p.tau_2));
    return d < 1e-12 ? 2.0 * kPi : d;
  };
  const auto start = std::min_element(
      pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
        return start_key(x) < start_key(y);
      });
  const double origin = std::arg(start->tau_1);
  std::stable_sort(pairs.begin(), pairs.end(),
                   [&](const ResonantPair& x, const ResonantPair& y) {
                     return clockwise(origin, std::arg(x.tau_1)) <
                            clockwise(origin, std::arg(y.tau_1));
                   });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].j = static_cast<int>(i) + 1;
  }
  return pairs;
}

std::pair<Complex, Complex> perturbation_coefficients(const Field& v0,
                                                      const Mode& mode,
                                                      int search_radius) {
  if (v0.nx < 4 * search_radius || v0.ny < 4 * search_radius ||
      v0.nx <= 0 || v0.ny <= 0) {
    throw Error(ErrorCode::Aliasing,
                "perturbation grid " + std::to_string(v0.nx) + "x" +
                    std::to_string(v0.ny) + " is too coarse for radius " +
                    std::to_string(search_radius));
  }
  const double n = static_cast<double>(v0.size());
  Complex mean = 0.0;
  for (const Complex& v : v0.u) mean += v;
  mean /= n;
  if (std::abs(mean) > 1e-10) {
    throw Error(ErrorCode::NonzeroMean,
                "perturbation mean " + std::to_string(std::abs(mean)) +
                    " is not zero");
  }
  // Phases on exact integer residues, so that every grid harmonic is
  // orthogonal to machine precision.
  auto phases = [](int count, int harmonic) {
    std::vector<Complex> out(count);
    const int h = ((harmonic % count) + count) % count;
    for (int i = 0; i < count; ++i) {
      const long r = (static_cast<long>(h) * i) % count;
      out[i] = std::polar(1.0, -2.0 * kPi * static_cast<double>(r) / count);
    }
    return out;
  };
  auto coefficient = [&](int hx, int hy) {
    const std::vector<Complex> ex = phases(v0.nx, hx);
    const std::vector<Complex> ey = phases(v0.ny, hy);
    Complex sum = 0.0;
    for (int iy = 0; iy < v0.ny; ++iy) {
      Complex row = 0.0;
      for (int ix = 0; ix < v0.nx; ++ix) row += v0.at(ix, iy) * ex[ix];
      sum += row * ey[iy];
    }
    return sum / n;
  };
  return {coefficient(mode.n_x, mode.n_y), coefficient(-mode.n_x, -mode.n_y)};
}

std::pair<Complex, Complex> alpha_beta(ResonantPair& pair, Complex c_j,
                                       Complex c_minus_j) {
  const double q1 = pair.tau_1.imag();
  const double q2 = pair.tau_2.imag();
  if (std::abs(q1) < 1e-9 || std::abs(q2) < 1e-9) {
    throw Error(ErrorCode::DegeneratePair, "resonant point on the real axis");
  }
  const Complex alpha =
      -(std::conj(c_j) + std::conj(pair.tau_1) * pair.tau_2 * c_minus_j) /
      (2.0 * q1);
  const Complex beta =
      (std::conj(c_minus_j) + std::conj(pair.tau_2) * pair.tau_1 * c_j) /
      (2.0 * q2);
  const Complex product = alpha * beta;
  if (std::abs(product) < 1e-14) {
    throw Error(ErrorCode::DegenerateMode,
                "alpha*beta vanishes, the handle does not open");
  }
  Complex s = std::sqrt(product);
  if (s.real() < 0.0 || (s.real() == 0.0 && s.imag() < 0.0)) s = -s;
  pair.c_plus = c_j;
  pair.c_minus = c_minus_j;
  pair.alpha = alpha;
  pair.beta = beta;
  pair.sqrt_alpha_beta = s;
  return {alpha, beta};
}

BranchPoints branch_points(const ResonantPair& pair, double eps) {
  if (std::abs(pair.alpha * pair.beta) < 1e-14) {
    throw Error(ErrorCode::DegenerateMode, "branch points of a closed handle");
  }
  const double q1 = pair.tau_1.imag();
  const double q2 = pair.tau_2.imag();
  const Complex scale = eps * pair.sqrt_alpha_beta / (kI * cross_im(pair));
  const Complex d1 = 2.0 * pair.tau_1 * q2 * scale;
  const Complex d2 = 2.0 * pair.tau_2 * q1 * scale;
  return {{pair.tau_1 + d1, pair.tau_1 - d1, pair.tau_2 + d2, pair.tau_2 - d2}};
}

CMatrix period_matrix(const std::vector<ResonantPair>& pairs, double eps) {
  const int g = static_cast<int>(pairs.size());
  CMatrix B(g, g);
  for (int j = 0; j < g; ++j) {
    const ResonantPair& p = pairs[j];
    const double q1 = p.tau_1.imag();
    const double q2 = p.tau_2.imag();
    const double s = cross_im(p);
    const Complex diff = p.tau_1 - p.tau_2;
    B(j, j) = std::log(p.tau_1 * p.tau_2 * q1 * q2 / (s * s * diff * diff) *
                       (eps * eps) * p.alpha * p.beta);
    for (int k = j + 1; k < g; ++k) {
      const ResonantPair& o = pairs[k];
      const Complex num =
          (p.tau_2 - o.tau_2) * (p.tau_1 - o.tau_1);
      const Complex den =
          (p.tau_2 - o.tau_1) * (p.tau_1 - o.tau_2);
      if (std::abs(num) < 1e-18 || std::abs(den) < 1e-18) {
        throw Error(ErrorCode::CrossRatioDegenerate,
                    "pairs " + std::to_string(p.j) + " and " +
                        std::to_string(o.j) + " share a point");
      }
      // The cross-ratio of four unit-circle points is real.
      const Complex r = num / den;
      const Complex b(std::log(std::abs(r)), r.real() < 0.0 ? kPi : 0.0);
      B(j, k) = b;
      B(k, j) = b;
    }
  }
  return B;
}

FrequencyVectors frequency_vectors(const std::vector<ResonantPair>& pairs) {
  const int g = static_cast<int>(pairs.size());
  FrequencyVectors f{CVector(g), CVector(g), CVector(g)};
  for (int j = 0; j < g; ++j) {
    const Complex t1 = pairs[j].tau_1;
    const Complex t2 = pairs[j].tau_2;
    f.W_z[j] = 0.5 * kI * (std::conj(t2) - std::conj(t1));
    f.W_zbar[j] = 0.5 * kI * (t2 - t1);
    f.W_t[j] = Complex((t1 * t1 - t2 * t2).imag(), 0.0);
  }
  return f;
}

CVector abel_infinity(const std::vector<ResonantPair>& pairs) {
  CVector out(static_cast<int>(pairs.size()));
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    out[static_cast<int>(j)] =
        std::log(pairs[j].tau_1 * std::conj(pairs[j].tau_2));
  }
  return out;
}

Complex abel_branch_point(const ResonantPair& pair, double eps) {
  const double q2 = pair.tau_2.imag();
  return -std::log(pair.tau_2 * q2 * eps * pair.sqrt_alpha_beta /
                   (kI * cross_im(pair) * (pair.tau_1 - pair.tau_2)));
}

DivisorData divisor_and_constants(const std::vector<ResonantPair>& pairs,
                                  const CMatrix& B, double eps) {
  const int g = static_cast<int>(pairs.size());
  DivisorData out{CVector(g), CVector(g), CVector(g)};
  for (int j = 0; j < g; ++j) {
    const ResonantPair& p = pairs[j];
    if (std::abs(p.alpha * p.beta) < 1e-14) {
      throw Error(ErrorCode::DegenerateMode,
                  pair_label(p) + ": alpha*beta vanishes");
    }
    out.A_div[j] = std::log(p.alpha / p.sqrt_alpha_beta);
    out.K[j] = 0.5 * B(j, j) - kI * kPi + abel_branch_point(p, eps);
    out.d[j] = -out.A_div[j] - out.K[j];
  }
  return out;
}

double reality_defect(const std::vector<ResonantPair>& pairs) {
  const std::size_t n = pairs.size() / 2;
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const ResonantPair& p = pairs[j];
    const ResonantPair& m = pairs[j + n];
    const Complex lhs = p.alpha * p.tau_1 / p.tau_2;
    const Complex rhs = -std::conj(m.alpha);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(p.alpha));
  }
  return worst;
}

SpectralData build_spectral_data(double L_x, double L_y, double eps,
                                 const Field& v0, double a,
                                 std::optional<int> search_radius) {
  if (!(L_x > 0.0) || !(L_y > 0.0)) {
    throw Error(ErrorCode::InvalidPeriod, "periods must be positive");
  }
  if (eps == 0.0) {
    throw Error(ErrorCode::DegenerateMode,
                "eps = 0: alpha = beta = 0, no handle opens");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  }
  const double tol = 1e-12 * std::max(L_x, L_y);
  if (std::abs(v0.L_x - L_x) > tol || std::abs(v0.L_y - L_y) > tol) {
    throw Error(ErrorCode::GridMismatch,
                "perturbation grid periods differ from the problem periods");
  }
  const Rescaling scaled = rescale(a, L_x, L_y, eps);
  const int radius =
      std::max(1, search_radius.value_or(min_search_radius(L_x, L_y, a)));

  const GenericityReport report = check_genericity(L_x, L_y, a, radius);
  if (!report.ok) {
    std::ostringstream os;
    os << "periods are not generic:";
    for (const Mode& m : report.on_circle_violations) {
      os << " (" << m.n_x << "," << m.n_y << ") on the circle k^2=4a^2;";
    }
    for (const Mode& m : report.marginal_modes) {
      os << " (" << m.n_x << "," << m.n_y << ") marginal kx^2=ky^2;";
    }
    for (const ResonantCollision& c : report.multiplicity_violations) {
      os << " modes (" << c.first_mode.first << "," << c.first_mode.second
         << ") and (" << c.second_mode.first << "," << c.second_mode.second
         << ") share a resonant point;";
    }
    throw Error(ErrorCode::Genericity, os.str());
  }

  const std::vector<Mode> modes =
      enumerate_modes(scaled.L_x, scaled.L_y, 1.0, radius);
  std::vector<ResonantPair> raw;
  for (const Mode& m : unstable_classes(modes)) {
    auto [p, q] = resonant_pair(m);
    const auto [c_k, c_minus_k] = perturbation_coefficients(v0, m, radius);
    p.c_plus = c_k;
    p.c_minus = c_minus_k;
    q.c_plus = c_minus_k;
    q.c_minus = c_k;
    raw.push_back(p);
    raw.push_back(q);
  }

  SpectralData sd;
  sd.a = a;
  sd.L_x = L_x;
  sd.L_y = L_y;
  sd.eps = eps;
  sd.pairs = order_pairs(std::move(raw));
  sd.g = static_cast<int>(sd.pairs.size());
  for (ResonantPair& p : sd.pairs) {
    with_pair_context(p, [&] { return alpha_beta(p, p.c_plus, p.c_minus); });
    sd.branch_points.push_back(
        with_pair_context(p, [&] { return branch_points(p, scaled.eps); }));
  }
  sd.B = period_matrix(sd.pairs, scaled.eps);
  FrequencyVectors f = frequency_vectors(sd.pairs);
  sd.W_z = std::move(f.W_z);
  sd.W_zbar = std::move(f.W_zbar);
  sd.W_t = std::move(f.W_t);
  sd.A_inf2 = abel_infinity(sd.pairs);
  DivisorData div = divisor_and_constants(sd.pairs, sd.B, scaled.eps);
  sd.A_div = std::move(div.A_div);
  sd.K = std::move(div.K);
  sd.d = std::move(div.d);
  sd.C0 = sd.Cz = sd.Czbar = sd.Ct = 0.0;
  sd.u00 = a + eps * v0.at(0, 0);
  return sd;
}

}  // namespace ds2aw
