#include "ds2aw/refsolver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "ds2aw/error.hpp"

namespace ds2aw {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool power_of_two_at_least_16(int n) {
  return n >= 16 && (n & (n - 1)) == 0;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<Complex*>(fftw_malloc(sizeof(Complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  Complex* data;
};

struct FftwPlan {
  FftwPlan(int ny, int nx, Complex* buf, int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(ny, nx, as_fftw(buf), as_fftw(buf), sign,
                            FFTW_ESTIMATE);
    if (plan == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "FFTW could not build a plan");
    }
  }
  ~FftwPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  // Runs the plan on another buffer from fftw_malloc (same alignment).
  void run(Complex* buf) const { fftw_execute_dft(plan, as_fftw(buf), as_fftw(buf)); }
  fftw_plan plan;
};

}  // namespace

struct Ds2Solver::Impl {
  Impl(double L_x_, double L_y_, int nx_, int ny_, SolverOptions opts_)
      : L_x(L_x_), L_y(L_y_), nx(nx_), ny(ny_), opts(opts_),
        n(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_)),
        u_buf(n), q_buf(n),
        forward(ny_, nx_, u_buf.data, FFTW_FORWARD),
        backward(ny_, nx_, u_buf.data, FFTW_BACKWARD),
        Q(n), D(n), keep(n, 1) {
    const double two_pi = 2.0 * std::numbers::pi;
    for (int iy = 0; iy < ny; ++iy) {
      const int my = iy <= ny / 2 ? iy : iy - ny;
      const double ky = two_pi * my / L_y;
      for (int ix = 0; ix < nx; ++ix) {
        const int mx = ix <= nx / 2 ? ix : ix - nx;
        const double kx = two_pi * mx / L_x;
        const std::size_t i = static_cast<std::size_t>(iy) * nx + ix;
        const double k2 = kx * kx + ky * ky;
        D[i] = kx * kx - ky * ky;
        Q[i] = k2 == 0.0 ? 0.0 : D[i] / k2;
        if (opts.dealias) {
          keep[i] = 3 * std::abs(mx) < nx && 3 * std::abs(my) < ny;
        }
      }
    }
  }

  void load(const Field& f, Complex* buf) const {
    std::copy(f.u.begin(), f.u.end(), buf);
  }

  // q into q_buf real parts; returns q as a vector as well.
  void compute_q(const Complex* u) {
    for (std::size_t i = 0; i < n; ++i) q_buf.data[i] = std::norm(u[i]);
    forward.run(q_buf.data);
    for (std::size_t i = 0; i < n; ++i) q_buf.data[i] *= Q[i];
    backward.run(q_buf.data);
    const double inv = 1.0 / static_cast<double>(n);
    double mean = 0.0;
    double worst_imag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      q_buf.data[i] *= inv;
      worst_imag = std::max(worst_imag, std::abs(q_buf.data[i].imag()));
      mean += q_buf.data[i].real();
    }
    mean *= inv;
    stats.max_imag = std::max(stats.max_imag, worst_imag);
    stats.max_mean = std::max(stats.max_mean, std::abs(mean));
  }

  void nonlinear_half(Complex* u, double dt) {
    compute_q(u);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] *= std::polar(1.0, q_buf.data[i].real() * dt);
    }
  }

  void linear(Complex* u, double dt) {
    if (dt != phase_dt || phase.empty()) {
      phase.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        phase[i] = keep[i] ? std::polar(1.0, -D[i] * dt) : Complex(0.0);
      }
      phase_dt = dt;
    }
    forward.run(u);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) u[i] *= phase[i] * inv;
    backward.run(u);
  }

  void step(Complex* u, double dt, double t_end) {
    nonlinear_half(u, dt);
    linear(u, dt);
    nonlinear_half(u, dt);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(u[i].real()) || !std::isfinite(u[i].imag())) {
        throw Error(ErrorCode::NanDetected,
                    "non-finite sample at t = " + std::to_string(t_end));
      }
    }
  }

  double bound_for(const Field& f) {
    load(f, q_buf.data);
    forward.run(q_buf.data);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(q_buf.data[i]));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(q_buf.data[i]) > 1e-12 * peak) {
        worst = std::max(worst, std::abs(D[i]));
      }
    }
    return worst == 0.0 ? std::numeric_limits<double>::infinity()
                        : 0.5 / worst;
  }

  void check_grid(const Field& f) const {
    if (f.nx != nx || f.ny != ny || f.u.size() != n) {
      throw Error(ErrorCode::GridMismatch,
                  "field grid " + std::to_string(f.nx) + "x" +
                      std::to_string(f.ny) + " does not match the solver");
    }
  }

  double L_x, L_y;
  int nx, ny;
  SolverOptions opts;
  std::size_t n;
  FftwBuffer u_buf;
  FftwBuffer q_buf;
  FftwPlan forward;
  FftwPlan backward;
  std::vector<double> Q;
  std::vector<double> D;
  std::vector<char> keep;
  std::vector<Complex> phase;
  double phase_dt = std::numeric_limits<double>::quiet_NaN();
  QStats stats;
};

Ds2Solver::Ds2Solver(double L_x, double L_y, int nx, int ny,
                     SolverOptions opts) {
  if (!(L_x > 0.0) || !(L_y > 0.0)) {
    throw Error(ErrorCode::InvalidPeriod, "solver periods must be positive");
  }
  if (!power_of_two_at_least_16(nx) || !power_of_two_at_least_16(ny)) {
    throw Error(ErrorCode::InvalidArgument,
                "solver grid sizes must be powers of two >= 16");
  }
  impl_ = std::make_unique<Impl>(L_x, L_y, nx, ny, opts);
}

Ds2Solver::~Ds2Solver() = default;
Ds2Solver::Ds2Solver(Ds2Solver&&) noexcept = default;
Ds2Solver& Ds2Solver::operator=(Ds2Solver&&) noexcept = default;

int Ds2Solver::nx() const { return impl_->nx; }
int Ds2Solver::ny() const { return impl_->ny; }
const std::vector<double>& Ds2Solver::q_multiplier() const { return impl_->Q; }
const QStats& Ds2Solver::q_stats() const { return impl_->stats; }
void Ds2Solver::reset_q_stats() { impl_->stats = {}; }

std::vector<double> Ds2Solver::q_from_u(const Field& field) {
  impl_->check_grid(field);
  impl_->compute_q(field.u.data());
  std::vector<double> q(impl_->n);
  for (std::size_t i = 0; i < impl_->n; ++i) q[i] = impl_->q_buf.data[i].real();
  return q;
}

double Ds2Solver::dt_bound(const Field& field) {
  impl_->check_grid(field);
  return impl_->bound_for(field);
}

void Ds2Solver::step(SolverState& state) {
  impl_->check_grid(state.field);
  if (impl_->opts.enforce_dt_bound &&
      std::abs(state.dt) > impl_->bound_for(state.field)) {
    throw Error(ErrorCode::InvalidArgument,
                "dt " + std::to_string(state.dt) +
                    " exceeds the splitting accuracy bound");
  }
  Complex* u = impl_->u_buf.data;
  impl_->load(state.field, u);
  impl_->step(u, state.dt, state.t + state.dt);
  std::copy(u, u + impl_->n, state.field.u.begin());
  state.t += state.dt;
  state.field.t = state.t;
}

EvolveResult Ds2Solver::evolve(const Field& u0, double T, double dt,
                               std::span<const double> snapshot_times) {
  impl_->check_grid(u0);
  if (dt == 0.0 || !std::isfinite(dt) || !std::isfinite(T) ||
      (T != 0.0 && (T > 0.0) != (dt > 0.0))) {
    throw Error(ErrorCode::InvalidArgument,
                "evolve needs a finite nonzero dt with the sign of T");
  }
  if (impl_->opts.enforce_dt_bound && std::abs(dt) > impl_->bound_for(u0)) {
    throw Error(ErrorCode::InvalidArgument,
                "dt " + std::to_string(dt) +
                    " exceeds the splitting accuracy bound " +
                    std::to_string(impl_->bound_for(u0)));
  }
  const double t0 = u0.t;
  const double t_end = t0 + T;
  const double dir = T >= 0.0 ? 1.0 : -1.0;
  double previous = t0;
  for (double s : snapshot_times) {
    if (dir * (s - t0) < -1e-12 || dir * (s - t_end) > 1e-12 ||
        dir * (s - previous) < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "snapshot times must be sorted inside the run interval");
    }
    previous = s;
  }

  EvolveResult result;
  Complex* u = impl_->u_buf.data;
  impl_->load(u0, u);
  double t = t0;
  auto advance_to = [&](double target) {
    const double span = target - t;
    if (span == 0.0) return;
    const long steps =
        std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
    const double h = span / static_cast<double>(steps);
    const double start = t;
    for (long k = 1; k <= steps; ++k) {
      const double next = k == steps ? target : start + k * h;
      impl_->step(u, h, next);
    }
    t = target;
  };
  auto snapshot = [&](double time) {
    Field f(impl_->L_x, impl_->L_y, impl_->nx, impl_->ny, time);
    std::copy(u, u + impl_->n, f.u.begin());
    return f;
  };
  for (double s : snapshot_times) {
    advance_to(s);
    result.snapshots.push_back(snapshot(s));
  }
  advance_to(t_end);
  result.final = snapshot(t_end);
  return result;
}

double l2_norm_squared(const Field& field) {
  double sum = 0.0;
  for (const Complex& v : field.u) sum += std::norm(v);
  return sum * field.L_x * field.L_y / static_cast<double>(field.u.size());
}

}  // namespace ds2aw
