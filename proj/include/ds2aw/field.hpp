#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ds2aw {

using Complex = std::complex<double>;

// Complex samples on the uniform periodic grid x = ix*L_x/nx, y = iy*L_y/ny,
// stored row-major: u[iy*nx + ix].
struct Field {
  double L_x = 0.0;
  double L_y = 0.0;
  int nx = 0;
  int ny = 0;
  double t = 0.0;
  std::vector<Complex> u;

  Field() = default;
  Field(double L_x_, double L_y_, int nx_, int ny_, double t_ = 0.0)
      : L_x(L_x_), L_y(L_y_), nx(nx_), ny(ny_), t(t_),
        u(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_)) {}

  std::size_t size() const { return u.size(); }
  double x(int ix) const { return ix * L_x / nx; }
  double y(int iy) const { return iy * L_y / ny; }
  Complex& at(int ix, int iy) {
    return u[static_cast<std::size_t>(iy) * nx + ix];
  }
  const Complex& at(int ix, int iy) const {
    return u[static_cast<std::size_t>(iy) * nx + ix];
  }

  template <class F>
  static Field sample(double L_x, double L_y, int nx, int ny, double t,
                      F&& f) {
    Field out(L_x, L_y, nx, ny, t);
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) out.at(ix, iy) = f(out.x(ix), out.y(iy));
    }
    return out;
  }
};

}  // namespace ds2aw
