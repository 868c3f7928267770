#pragma once

#include <cstdint>
#include <filesystem>

#include "ds2aw/field.hpp"

namespace ds2aw {

inline constexpr std::uint32_t kFieldFormatVersion = 1;

// Little-endian: "DS2F", u32 version, u32 nx, u32 ny, f64 L_x, L_y, t, then
// nx*ny complex128 (re, im) row-major.
void write_field_binary(const std::filesystem::path& path, const Field& f);
Field read_field_binary(const std::filesystem::path& path);

// Header x,y,re_u,im_u,abs_u; one row per sample, row-major.
void write_field_csv(const std::filesystem::path& path, const Field& f);

}  // namespace ds2aw
