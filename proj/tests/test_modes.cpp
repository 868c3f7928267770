#include <random>
#include <set>

#include "doctest.h"
#include "ds2aw/error.hpp"
#include "ds2aw/modes.hpp"
#include "oracles/oracles.hpp"

using namespace ds2aw;
using oracle::pi;

namespace {

std::set<std::pair<int, int>> unstable_of(const std::vector<Mode>& modes) {
  std::set<std::pair<int, int>> out;
  for (const Mode& m : modes)
    if (m.unstable) out.insert({m.n_x, m.n_y});
  return out;
}

}  // namespace

TEST_CASE("four unstable classes for the two-period example") {
  const double Lx = 2 * pi / 1.2, Ly = 2 * pi / 1.4;
  const auto modes = enumerate_modes(Lx, Ly, 1.0, min_search_radius(Lx, Ly, 1.0));
  std::set<std::pair<int, int>> classes;
  for (const Mode& m : unstable_classes(modes)) classes.insert({m.n_x, m.n_y});
  CHECK(classes == std::set<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 1}, {1, -1}});
  CHECK(unstable_of(modes).size() == 8);
}

TEST_CASE("a single unstable class when k_y is too large") {
  const double Lx = 2 * pi / 1.2, Ly = 2 * pi / 2.1;
  const auto modes = enumerate_modes(Lx, Ly, 1.0, min_search_radius(Lx, Ly, 1.0));
  const auto classes = unstable_classes(modes);
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].n_x == 1);
  CHECK(classes[0].n_y == 0);
  CHECK(unstable_of(modes) == oracle::unstable_set(Lx, Ly, 1.0, 20));
}

TEST_CASE("enumeration is sorted, complete and excludes the zero mode") {
  const auto modes = enumerate_modes(pi, pi, 1.0, 3);
  CHECK(modes.size() == 48);
  for (std::size_t i = 1; i < modes.size(); ++i) {
    const auto p = std::make_pair(modes[i - 1].n_x, modes[i - 1].n_y);
    const auto q = std::make_pair(modes[i].n_x, modes[i].n_y);
    CHECK(p < q);
  }
  for (const Mode& m : modes) {
    CHECK_FALSE((m.n_x == 0 && m.n_y == 0));
    CHECK(m.k_x == doctest::Approx(m.n_x * 2 * pi / pi));
  }
  // (1,1) has kx = ky = 2: sigma vanishes, outside the disk anyway.
  const Mode& diag = *std::find_if(modes.begin(), modes.end(), [](const Mode& m) {
    return m.n_x == 1 && m.n_y == 1;
  });
  CHECK(std::abs(diag.sigma) == 0.0);
  CHECK_FALSE(diag.unstable);
  CHECK(unstable_of(modes) == oracle::unstable_set(pi, pi, 1.0, 10));
}

TEST_CASE("growth rate values and branches") {
  CHECK(growth_rate(1.2, 0.0, 1.0).real() == doctest::Approx(1.92).epsilon(1e-15));
  CHECK(growth_rate(1.2, 0.0, 1.0).imag() == 0.0);
  CHECK(std::abs(growth_rate(0.9, 0.9, 1.0)) == 0.0);
  const Complex s = growth_rate(3.0, 0.0, 1.0);
  CHECK(s.real() == 0.0);
  CHECK(s.imag() > 0.0);
  CHECK(s.imag() == doctest::Approx(9.0 * std::sqrt(5.0) / 3.0));
  CHECK_THROWS_AS(growth_rate(0.0, 0.0, 1.0), Error);
  try {
    growth_rate(0.0, 0.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroWavevector);
  }
}

TEST_CASE("growth rate matches the integrated linear system") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2.5, 2.5);
  int unstable = 0, stable = 0;
  while (unstable < 20 || stable < 20) {
    const double kx = U(rng), ky = U(rng), a = 0.5 + std::abs(U(rng)) / 2;
    const double k2 = kx * kx + ky * ky;
    if (k2 < 1e-4 || std::abs(k2 - 4 * a * a) < 1e-2) continue;
    if (std::abs(kx * kx - ky * ky) < 1e-3) continue;
    const double want = oracle::linear_rate(kx, ky, a);
    const double got = std::abs(growth_rate(kx, ky, a));
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
    (k2 < 4 * a * a ? unstable : stable)++;
  }
}

TEST_CASE("sign symmetry and axis-swap antisymmetry") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.4, 1.4);
  for (int i = 0; i < 200; ++i) {
    const double kx = U(rng), ky = U(rng);
    if (kx == 0 && ky == 0) continue;
    const Complex s = growth_rate(kx, ky, 1.0);
    CHECK(growth_rate(-kx, -ky, 1.0) == s);
    if (kx * kx + ky * ky < 4.0) CHECK(growth_rate(ky, kx, 1.0).real() == doctest::Approx(-s.real()));
  }
  const auto modes = enumerate_modes(2 * pi / 0.7, 2 * pi / 0.45, 1.3, 12);
  for (const Mode& m : modes) {
    const Mode n = make_mode(-m.n_x, -m.n_y, 2 * pi / 0.7, 2 * pi / 0.45, 1.3);
    CHECK(std::abs(n.sigma) == std::abs(m.sigma));
    CHECK(n.unstable == m.unstable);
  }
}

TEST_CASE("unstable set equals the brute-force disk scan") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.15, 2.2);
  for (int trial = 0; trial < 30; ++trial) {
    const double Lx = 2 * pi / U(rng), Ly = 2 * pi / U(rng), a = 0.4 + U(rng) / 2;
    const int r = min_search_radius(Lx, Ly, a);
    const auto want = oracle::unstable_set(Lx, Ly, a, r + 10);
    CHECK(unstable_of(enumerate_modes(Lx, Ly, a, r)) == want);
    CHECK(unstable_of(enumerate_modes(Lx, Ly, a, r + 3)) == want);
  }
}

TEST_CASE("genericity report") {
  const int r1 = min_search_radius(2 * pi / 1.2, 2 * pi / 1.4, 1.0);
  CHECK(check_genericity(2 * pi / 1.2, 2 * pi / 1.4, 1.0, r1).ok);

  const auto circle = check_genericity(pi, 2 * pi, 1.0, 2);
  CHECK_FALSE(circle.ok);
  REQUIRE_FALSE(circle.on_circle_violations.empty());
  CHECK(std::abs(circle.on_circle_violations[0].k2() - 4.0) < 1e-12);

  // kx = ky = 1 sits inside the disk with a vanishing rate.
  const auto marginal = check_genericity(2 * pi, 2 * pi, 1.0, 2);
  CHECK_FALSE(marginal.ok);
  CHECK(marginal.marginal_modes.size() == 4);

  const auto plain = check_genericity(pi, pi, 1.0, 2);
  CHECK(plain.marginal_modes.empty());

  // Modes (1,-1) and (1,1) share the resonant point i when
  // kx = cos(pi/6) and ky = 1 - sin(pi/6).
  const auto shared =
      check_genericity(2 * pi / std::cos(pi / 6), 2 * pi / 0.5, 1.0, 4);
  CHECK_FALSE(shared.ok);
  REQUIRE_FALSE(shared.multiplicity_violations.empty());
  bool found = false;
  for (const auto& c : shared.multiplicity_violations) {
    if (std::abs(std::abs(c.point.imag()) - 1.0) < 1e-9) found = true;
  }
  CHECK(found);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(enumerate_modes(0.0, 1.0, 1.0, 3), Error);
  CHECK_THROWS_AS(enumerate_modes(1.0, -1.0, 1.0, 3), Error);
  try {
    enumerate_modes(-1.0, 1.0, 1.0, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidPeriod);
  }
  CHECK_THROWS_AS(enumerate_modes(20.0, 20.0, 1.0, 2), Error);
}
