#include <random>

#include "doctest.h"
#include "ds2aw/error.hpp"
#include "ds2aw/modes.hpp"
#include "ds2aw/refsolver.hpp"
#include "oracles/oracles.hpp"

using namespace ds2aw;
using oracle::pi;

namespace {

Field sample(double Lx, double Ly, int n, auto&& f) {
  return Field::sample(Lx, Ly, n, n, 0.0, [&](double x, double y) { return Complex(f(x, y)); });
}

double max_diff(const Field& a, const Field& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.u.size(); ++i) m = std::max(m, std::abs(a.u[i] - b.u[i]));
  return m;
}

SolverOptions free_dt() {
  SolverOptions o;
  o.enforce_dt_bound = false;
  return o;
}

// Seed along one eigenvector of the linearized pair system over background 1:
// u = 1 + delta (A e^{ik.x} + conj(Bc) e^{-ik.x}) with (A, Bc) an eigenvector
// of [[D - G, -G], [G, -(D - G)]], G = 2D/k^2. Returns the eigenvalue mu;
// the pair evolves as e^{-i mu t}.
Complex seed(Field& u, int mx, int my, double delta) {
  const double kx = 2 * pi * mx / u.L_x, ky = 2 * pi * my / u.L_y;
  const double D = kx * kx - ky * ky, G = 2 * D / (kx * kx + ky * ky);
  Complex mu = std::sqrt(Complex(D * (D - 2 * G)));
  if (mu.imag() < 0) mu = -mu;
  Complex A = G, Bc = D - G - mu;
  const double norm = std::sqrt(std::norm(A) + std::norm(Bc));
  A /= norm;
  Bc /= norm;
  for (int iy = 0; iy < u.ny; ++iy)
    for (int ix = 0; ix < u.nx; ++ix) {
      const Complex e = std::exp(Complex(0, kx * u.x(ix) + ky * u.y(iy)));
      u.at(ix, iy) = 1.0 + delta * (A * e + std::conj(Bc) / e);
    }
  return mu;
}

}  // namespace

TEST_CASE("q from u") {
  const double Lx = 2 * pi / 1.2, Ly = 2 * pi / 1.4;
  Ds2Solver s(Lx, Ly, 16, 16);
  const double kx = 1.2, ky = 1.4;
  // |u|^2 = 2 + cos(kx x) + cos(ky y) + cos(kx x + ky y)
  const Field u = sample(Lx, Ly, 16, [&](double x, double y) {
    return std::sqrt(2 + std::cos(kx * x) + std::cos(ky * y) + std::cos(kx * x + ky * y));
  });
  const std::vector<double> q = s.q_from_u(u);
  const double Qd = (kx * kx - ky * ky) / (kx * kx + ky * ky);
  for (int iy = 0; iy < 16; ++iy)
    for (int ix = 0; ix < 16; ++ix) {
      const double x = u.x(ix), y = u.y(iy);
      const double want = std::cos(kx * x) - std::cos(ky * y) + Qd * std::cos(kx * x + ky * y);
      CHECK(std::abs(q[iy * 16 + ix] - want) < 1e-13);
    }
  CHECK(s.q_multiplier()[0] == 0.0);
  CHECK(s.q_multiplier()[1] == 1.0);
  CHECK(s.q_multiplier()[16] == -1.0);
}

TEST_CASE("constant background is stationary") {
  for (bool dealias : {false, true}) {
    SolverOptions o;
    o.dealias = dealias;
    Ds2Solver s(2 * pi / 1.2, 2 * pi / 2.1, 32, 32, o);
    Field u(2 * pi / 1.2, 2 * pi / 2.1, 32, 32, 0.0);
    for (Complex& v : u.u) v = 1.0;
    const std::vector<double> times = {1.0, 5.0};
    const EvolveResult r = s.evolve(u, 5.0, 1e-3, times);
    for (const Field& f : r.snapshots) CHECK(max_diff(f, u) <= 1e-13);
    CHECK(s.dt_bound(u) == std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("L2 norm is conserved and q stays real with zero mean") {
  const double Lx = 2 * pi / 1.2, Ly = 2 * pi / 2.1;
  Ds2Solver s(Lx, Ly, 64, 64);
  const Field u0 = sample(Lx, Ly, 64, [](double x, double y) {
    return 1.0 + 0.05 * std::cos(1.2 * x) + 0.02 * std::sin(2.1 * y - 1.2 * x);
  });
  const double n0 = l2_norm_squared(u0);
  std::vector<double> times;
  for (int i = 1; i <= 5; ++i) times.push_back(i);
  const EvolveResult r = s.evolve(u0, 5.0, 1e-3, times);
  for (const Field& f : r.snapshots) CHECK(std::abs(l2_norm_squared(f) - n0) <= 1e-12 * n0);
  CHECK(s.q_stats().max_imag <= 1e-12);
  CHECK(s.q_stats().max_mean <= 1e-12);
  s.reset_q_stats();
  CHECK(s.q_stats().max_imag == 0.0);
}

TEST_CASE("small perturbations follow the dispersion relation") {
  const double L = 2 * pi / 0.3;
  // Unstable (4,0), (3,1), (1,4); stable (8,0), (2,7), (7,4).
  const std::vector<std::pair<int, int>> ks = {{4, 0}, {3, 1}, {1, 4}, {8, 0}, {2, 7}, {7, 4}};
  for (auto [mx, my] : ks) {
    Field u(L, L, 32, 32, 0.0);
    const Complex mu = seed(u, mx, my, 1e-4);
    Ds2Solver s(L, L, 32, 32);
    std::vector<double> ts;
    for (int i = 0; i <= 10; ++i) ts.push_back(0.1 * i);
    const EvolveResult r = s.evolve(u, 1.0, 1e-3, ts);
    std::vector<double> amp, phase;
    double unwrap = 0, last = 0;
    for (const Field& f : r.snapshots) {
      const Complex c = oracle::grid_coefficient(f.u, 32, 32, mx, my);
      amp.push_back(std::log(std::abs(c)));
      double p = std::arg(c);
      if (!phase.empty()) {
        while (p + unwrap - last > pi) unwrap -= 2 * pi;
        while (p + unwrap - last < -pi) unwrap += 2 * pi;
      }
      last = p + unwrap;
      phase.push_back(last);
    }
    const double kx = 0.3 * mx, ky = 0.3 * my;
    const Complex sigma = growth_rate(kx, ky, 1.0);
    const double want = oracle::linear_rate(kx, ky, 1.0);
    CAPTURE(mx);
    CAPTURE(my);
    CHECK(std::abs(sigma) == doctest::Approx(want).epsilon(1e-6));
    if (kx * kx + ky * ky < 4) {
      CHECK(oracle::slope(ts, amp) == doctest::Approx(std::abs(mu.imag())).epsilon(0.01));
      CHECK(oracle::slope(ts, amp) == doctest::Approx(want).epsilon(0.01));
    } else {
      CHECK(std::abs(oracle::slope(ts, phase)) == doctest::Approx(want).epsilon(0.01));
    }
  }
}

TEST_CASE("time reversibility") {
  const double Lx = 2 * pi / 1.2, Ly = 2 * pi / 1.4;
  // The evolved state populates high harmonics, so the backward run skips
  // the accuracy bound.
  Ds2Solver s(Lx, Ly, 32, 32, free_dt());
  const Field u0 = sample(Lx, Ly, 32, [](double x, double y) {
    return 1.0 + 0.1 * std::cos(1.2 * x) + 0.1 * std::cos(1.4 * y + 0.3);
  });
  const Field mid = s.evolve(u0, 1.0, 1e-3, {}).final;
  const Field back = s.evolve(mid, -1.0, -1e-3, {}).final;
  CHECK(max_diff(back, u0) <= 1e-8);
  CHECK(back.t == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("second order in time") {
  const double Lx = 2 * pi / 1.2, Ly = 2 * pi / 1.4;
  Ds2Solver s(Lx, Ly, 32, 32, free_dt());
  const Field u0 = sample(Lx, Ly, 32, [](double x, double y) {
    return 1.0 + 0.3 * std::cos(1.2 * x) + 0.3 * std::cos(1.4 * y + 0.3);
  });
  const Field ref = s.evolve(u0, 0.5, 0.5 / 1600, {}).final;
  std::vector<double> errs;
  for (int steps : {25, 50, 100}) errs.push_back(max_diff(s.evolve(u0, 0.5, 0.5 / steps, {}).final, ref));
  for (int i = 0; i + 1 < 3; ++i) {
    const double order = std::log2(errs[i] / errs[i + 1]);
    CHECK(order >= 1.8);
    CHECK(order <= 2.2);
  }
}

TEST_CASE("background rescaling") {
  // u(x, y, t) = a U(a x, a y, a^2 t) maps background a to background 1.
  const double a = 2.0, L = 2 * pi / 1.2;
  Ds2Solver big(L, L, 32, 32);
  Ds2Solver unit(a * L, a * L, 32, 32);
  const Field u0 = sample(L, L, 32, [&](double x, double y) {
    return a + 0.02 * std::cos(1.2 * x) + 0.01 * std::sin(1.2 * y);
  });
  Field U0(a * L, a * L, 32, 32, 0.0);
  for (std::size_t i = 0; i < U0.u.size(); ++i) U0.u[i] = u0.u[i] / a;
  const Field u = big.evolve(u0, 0.25, 0.25 / 500, {}).final;
  const Field U = unit.evolve(U0, 1.0, 1.0 / 500, {}).final;
  double worst = 0;
  for (std::size_t i = 0; i < u.u.size(); ++i)
    worst = std::max(worst, std::abs(u.u[i] - a * U.u[i]) / std::abs(u.u[i]));
  CHECK(worst <= 1e-6);
}

TEST_CASE("snapshots land on requested times") {
  const double L = 2 * pi / 1.2;
  Ds2Solver s(L, L, 16, 16);
  const Field u0 = sample(L, L, 16, [](double x, double) { return 1.0 + 0.01 * std::cos(1.2 * x); });
  const std::vector<double> times = {0.0, 0.0105, 0.5, 0.5, 0.77};
  const EvolveResult r = s.evolve(u0, 1.0, 1e-2, times);
  REQUIRE(r.snapshots.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(r.snapshots[i].t == times[i]);
  CHECK(r.snapshots[0].u == u0.u);
  CHECK(r.snapshots[2].u == r.snapshots[3].u);
  CHECK(r.final.t == 1.0);

  Ds2Solver loose(L, L, 16, 16, free_dt());
  SolverState st{u0, 0.0, 1e-2};
  for (int i = 0; i < 50; ++i) loose.step(st);
  CHECK(max_diff(st.field, loose.evolve(u0, 0.5, 1e-2, {}).final) <= 1e-14);
  st.dt = 0.4;
  CHECK_THROWS_AS(s.step(st), Error);
}

TEST_CASE("errors") {
  const double L = 2 * pi / 1.2;
  CHECK_THROWS_AS(Ds2Solver(L, L, 24, 32), Error);
  CHECK_THROWS_AS(Ds2Solver(L, L, 8, 8), Error);
  CHECK_THROWS_AS(Ds2Solver(-L, L, 16, 16), Error);
  Ds2Solver s(L, L, 16, 16);
  Field wrong(L, L, 32, 32, 0.0);
  try {
    s.q_from_u(wrong);
    FAIL("expected grid-mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
  const Field u0 = sample(L, L, 16, [](double x, double) { return 1.0 + 0.01 * std::cos(1.2 * 7 * x); });
  // Harmonic 7 has D = 70.56: the bound is 0.5 / 70.56.
  CHECK(s.dt_bound(u0) == doctest::Approx(0.5 / (8.4 * 8.4)));
  CHECK_THROWS_AS(s.evolve(u0, 1.0, 1e-2, {}), Error);
  CHECK_THROWS_AS(s.evolve(u0, 1.0, -1e-3, {}), Error);
  const std::vector<double> unsorted = {0.5, 0.2};
  CHECK_THROWS_AS(s.evolve(u0, 1.0, 1e-3, unsorted), Error);
  const std::vector<double> outside = {1.5};
  CHECK_THROWS_AS(s.evolve(u0, 1.0, 1e-3, outside), Error);

  Ds2Solver loose(L, L, 16, 16, free_dt());
  Field bad = u0;
  bad.u[5] = Complex(std::nan(""), 0.0);
  SolverState st{bad, 0.0, 1e-3};
  try {
    loose.step(st);
    FAIL("expected nan-detected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NanDetected);
  }
}
