#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ds2aw/field.hpp"

namespace ds2aw {

struct SolverOptions {
  // Reject dt above 0.5 / max|kx^2 - ky^2| over the harmonics present in the
  // data being stepped.
  bool enforce_dt_bound = true;
  // 2/3-rule filter applied after every linear sub-step.
  bool dealias = false;
};

struct SolverState {
  Field field;
  double t = 0.0;
  double dt = 0.0;
};

struct QStats {
  double max_imag = 0.0;  // largest |Im q| before it is discarded
  double max_mean = 0.0;  // largest |mean q|
};

struct EvolveResult {
  std::vector<Field> snapshots;
  Field final;
};

// Strang split-step integrator for i u_t + u_xx - u_yy + 2 q u = 0 with
// q^ = (kx^2 - ky^2)/(kx^2 + ky^2) |u|^2^ and zero-mean q.
class Ds2Solver {
 public:
  Ds2Solver(double L_x, double L_y, int nx, int ny, SolverOptions opts = {});
  ~Ds2Solver();
  Ds2Solver(Ds2Solver&&) noexcept;
  Ds2Solver& operator=(Ds2Solver&&) noexcept;
  Ds2Solver(const Ds2Solver&) = delete;
  Ds2Solver& operator=(const Ds2Solver&) = delete;

  int nx() const;
  int ny() const;
  // (kx^2 - ky^2)/(kx^2 + ky^2) on the FFT grid, 0 at the zero mode.
  const std::vector<double>& q_multiplier() const;

  std::vector<double> q_from_u(const Field& field);

  // Largest dt allowed for the harmonics present in `field`.
  double dt_bound(const Field& field);

  void step(SolverState& state);

  // Advances u0 to time u0.t + T. Snapshot times are absolute, within
  // [u0.t, u0.t + T] and sorted; steps are shortened to land on them.
  EvolveResult evolve(const Field& u0, double T, double dt,
                      std::span<const double> snapshot_times);

  const QStats& q_stats() const;
  void reset_q_stats();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double l2_norm_squared(const Field& field);

}  // namespace ds2aw
