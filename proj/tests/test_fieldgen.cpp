#include <random>

#include "doctest.h"
#include "ds2aw/error.hpp"
#include "ds2aw/fieldgen.hpp"
#include "oracles/oracles.hpp"

using namespace ds2aw;
using oracle::pi;

namespace {

const double kLx = 2 * pi / 1.2;
const double kLy1 = 2 * pi / 1.4;
const double kLy2 = 2 * pi / 2.1;

Field grid_of(const std::vector<oracle::Term>& terms, double Lx, double Ly,
              int n = 16) {
  return Field::sample(Lx, Ly, n, n, 0.0, [&](double x, double y) {
    return oracle::synthesize(terms, Lx, Ly, x, y);
  });
}

SpectralData single_mode(double eps, double a = 1.0) {
  return build_spectral_data(kLx, kLy2, eps, grid_of({{1, 0, 0.5}, {-1, 0, 0.5}}, kLx, kLy2),
                             a);
}

SpectralData four_classes(double eps) {
  const std::vector<oracle::Term> terms = {
      {1, 0, {0.5, 0.1}},   {-1, 0, {0.5, -0.1}}, {0, 1, {0.3, 0.2}},
      {0, -1, {0.3, -0.2}}, {1, 1, {-0.1, 0.4}},  {-1, -1, {-0.1, -0.4}},
      {1, -1, {0.2, -0.3}}, {-1, 1, {0.2, 0.3}}};
  return build_spectral_data(kLx, kLy1, eps, grid_of(terms, kLx, kLy1), 1.0);
}

FiniteGapSolution solution_of(const SpectralData& sd, std::vector<double> times,
                              double tol = 1e-12) {
  return FiniteGapSolution(sd, adaptive_theta_params(sd, times, tol));
}

}  // namespace

TEST_CASE("normalization at the origin") {
  for (double a : {1.0, 0.9, 0.95}) {
    const SpectralData sd = single_mode(1e-2, a);
    const FiniteGapSolution u = solution_of(sd, {0.0});
    CHECK(std::abs(u(0, 0, 0) - sd.u00) < 1e-15);
    CHECK(std::abs(sd.u00 - Complex(a + 1e-2)) < 1e-15);
  }
  const SpectralData sd = four_classes(1e-2);
  CHECK(std::abs(solution_of(sd, {0.0})(0, 0, 0) - sd.u00) < 1e-14);
}

TEST_CASE("double periodicity") {
  const SpectralData sd = four_classes(1e-2);
  const FiniteGapSolution u = solution_of(sd, {0.0, 1.0});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double x = kLx * U(rng), y = kLy1 * U(rng), t = U(rng);
    const Complex v = u(x, y, t);
    CHECK(std::abs(u(x + kLx, y, t) - v) <= 1e-9 * std::abs(v));
    CHECK(std::abs(u(x, y - kLy1, t) - v) <= 1e-9 * std::abs(v));
    CHECK(std::abs(u(x - 2 * kLx, y + kLy1, t) - v) <= 1e-9 * std::abs(v));
  }
}

TEST_CASE("single mode depends on x only and is even") {
  const FiniteGapSolution u = solution_of(single_mode(1e-2), {0.0, 3.0});
  for (double t : {0.0, 1.0, 2.5}) {
    for (double x : {0.3, 1.1, 4.0}) {
      const Complex v = u(x, 0.0, t);
      CHECK(std::abs(u(x, 1.7, t) - v) <= 1e-12 * std::abs(v));
      CHECK(std::abs(u(-x, 0.0, t) - v) <= 1e-10 * std::abs(v));
    }
  }
}

TEST_CASE("grid evaluation matches pointwise and is thread independent") {
  const SpectralData sd = single_mode(1e-2);
  const std::vector<double> times = {0.0, 0.5, 2.5};
  const FiniteGapSolution u = solution_of(sd, times);
  const auto one = evaluate_grid(times, 8, 8, u, 1);
  const auto four = evaluate_grid(times, 8, 8, u, 4);
  REQUIRE(one.size() == 3);
  for (std::size_t s = 0; s < times.size(); ++s) {
    CHECK(one[s].t == times[s]);
    CHECK(one[s].u == four[s].u);
    for (int iy = 0; iy < 8; iy += 3)
      for (int ix = 0; ix < 8; ix += 3)
        CHECK(one[s].at(ix, iy) == u(one[s].x(ix), one[s].y(iy), times[s]));
  }
  CHECK_THROWS_AS(evaluate_grid(times, 4, 8, u, 1), Error);
}

TEST_CASE("no unstable modes gives the constant background") {
  const double L = 2.0;  // every k exceeds 2
  const Field v0 = Field::sample(L, L, 16, 16, 0.0, [&](double x, double) {
    return Complex(std::cos(2 * pi * x / L));
  });
  const SpectralData sd = build_spectral_data(L, L, 1e-2, v0, 1.0);
  REQUIRE(sd.g == 0);
  const FiniteGapSolution u(sd, adaptive_theta_params(sd, std::vector<double>{1.0}, 1e-12));
  CHECK(u(0.3, 0.7, 5.0) == sd.u00);
  CHECK_THROWS_AS(first_appearance_estimate(sd), Error);
}

TEST_CASE("deviation grows at the linear rate") {
  // Small eps keeps the window before saturation long.
  const SpectralData sd = single_mode(1e-5);
  std::vector<double> ts, logs;
  for (double t = 1.5; t <= 4.5; t += 0.25) ts.push_back(t);
  const FiniteGapSolution u = solution_of(sd, ts);
  for (double t : ts) {
    double lo = 1e300, hi = 0;
    for (int i = 0; i < 32; ++i) {
      const double m = std::abs(u(i * kLx / 32, 0.0, t));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    logs.push_back(std::log(hi - lo));
  }
  const double rate = oracle::slope(ts, logs);
  CHECK(rate == doctest::Approx(1.92).epsilon(0.05));
}

TEST_CASE("first appearance estimate") {
  // C = |sqrt(alpha beta)| = 1/2 for cos(1.2x).
  CHECK(first_appearance_estimate(single_mode(1e-2)) ==
        doctest::Approx(std::log(200.0) / 1.92).epsilon(1e-12));
  // Background a is the unit problem on periods a L with amplitude eps/a,
  // run a^2 times faster.
  const double a = 0.9;
  const Field v0 = grid_of({{1, 0, 0.5}, {-1, 0, 0.5}}, a * kLx, a * kLy2);
  const SpectralData unit = build_spectral_data(a * kLx, a * kLy2, 1e-2 / a, v0, 1.0);
  CHECK(first_appearance_estimate(single_mode(1e-2, a)) ==
        doctest::Approx(first_appearance_estimate(unit) / (a * a)).epsilon(1e-12));
}

TEST_CASE("rogue wave exceeds twice the background") {
  const SpectralData sd = single_mode(1e-2);
  const double T1 = first_appearance_estimate(sd);
  std::vector<double> ts;
  for (double t = 0.0; t <= 2 * T1; t += 0.05) ts.push_back(t);
  const FiniteGapSolution u = solution_of(sd, ts);
  double peak = 0, when = 0;
  for (double t : ts)
    for (int i = 0; i < 64; ++i) {
      const double m = std::abs(u(i * kLx / 64, 0.0, t));
      if (m > peak) {
        peak = m;
        when = t;
      }
    }
  CHECK(peak > 2.0);
  CHECK(peak < 3.0);
  CHECK(when > 0.5 * T1);
}

TEST_CASE("parameter checks") {
  const SpectralData sd = single_mode(1e-2);
  ThetaParams p = adaptive_theta_params(sd, std::vector<double>{0.0}, 1e-12);
  p.B(0, 0) += 0.1;
  CHECK_THROWS_AS(FiniteGapSolution(sd, p), Error);
  ThetaParams wrong;
  wrong.B = CMatrix::Identity(3, 3) * -1.0;
  CHECK_THROWS_AS(FiniteGapSolution(sd, wrong), Error);
}
