#include "ds2aw/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "ds2aw/error.hpp"

namespace ds2aw {

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'S', '2', 'F'};

template <class T>
void put(std::vector<char>& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.insert(out.end(), bytes.begin(), bytes.end());
}

template <class T>
T get(const std::vector<char>& in, std::size_t& pos,
      const std::filesystem::path& path) {
  if (pos + sizeof(T) > in.size()) {
    throw Error(ErrorCode::Io, "truncated field file " + path.string());
  }
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::ofstream open_out(const std::filesystem::path& path,
                       std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return out;
}

}  // namespace

void write_field_binary(const std::filesystem::path& path, const Field& f) {
  std::vector<char> buf;
  buf.reserve(40 + 16 * f.u.size());
  buf.insert(buf.end(), kMagic.begin(), kMagic.end());
  put<std::uint32_t>(buf, kFieldFormatVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.nx));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.ny));
  put<double>(buf, f.L_x);
  put<double>(buf, f.L_y);
  put<double>(buf, f.t);
  for (const Complex& v : f.u) {
    put<double>(buf, v.real());
    put<double>(buf, v.imag());
  }
  std::ofstream out = open_out(path, std::ios::binary | std::ios::trunc);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Field read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (buf.size() < kMagic.size() ||
      !std::equal(kMagic.begin(), kMagic.end(), buf.begin())) {
    throw Error(ErrorCode::Io, path.string() + " is not a DS2F field file");
  }
  std::size_t pos = kMagic.size();
  const auto version = get<std::uint32_t>(buf, pos, path);
  if (version != kFieldFormatVersion) {
    throw Error(ErrorCode::Io, "unsupported field file version " +
                                   std::to_string(version));
  }
  const auto nx = get<std::uint32_t>(buf, pos, path);
  const auto ny = get<std::uint32_t>(buf, pos, path);
  const double L_x = get<double>(buf, pos, path);
  const double L_y = get<double>(buf, pos, path);
  const double t = get<double>(buf, pos, path);
  if (buf.size() - pos != 16ull * nx * ny) {
    throw Error(ErrorCode::Io, "sample count mismatch in " + path.string());
  }
  Field f(L_x, L_y, static_cast<int>(nx), static_cast<int>(ny), t);
  for (Complex& v : f.u) {
    const double re = get<double>(buf, pos, path);
    const double im = get<double>(buf, pos, path);
    v = {re, im};
  }
  return f;
}

void write_field_csv(const std::filesystem::path& path, const Field& f) {
  std::ofstream out = open_out(path, std::ios::trunc);
  out.precision(17);
  out << "x,y,re_u,im_u,abs_u\n";
  for (int iy = 0; iy < f.ny; ++iy) {
    for (int ix = 0; ix < f.nx; ++ix) {
      const Complex v = f.at(ix, iy);
      out << f.x(ix) << ',' << f.y(iy) << ',' << v.real() << ',' << v.imag()
          << ',' << std::abs(v) << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace ds2aw
