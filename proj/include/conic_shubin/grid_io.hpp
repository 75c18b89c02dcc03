#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "conic_shubin/grid.hpp"

namespace conic_shubin {

/// Payload kind in the CSHB header.
enum class CshbKind : std::uint32_t { Function = 1, Operator = 2 };

/// 16-byte header: magic "CSHB", u32 nt, u32 nz, u32 kind (little-endian).
struct CshbHeader {
  std::uint32_t nt = 0;
  std::uint32_t nz = 0;
  CshbKind kind = CshbKind::Function;
};

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// nt x nz samples, row-major (t index outer), complex128.
void write_function_cshb(const std::filesystem::path& path, const GridFunction& u);
/// Dense (nt nz) x (nt nz) matrix in the physical basis, row-major.
void write_operator_cshb(const std::filesystem::path& path, const GridOperator& A);

CshbHeader read_cshb_header(const std::filesystem::path& path);
/// The header fixes nt and nz; the window and closure come from `window`.
/// Throws std::runtime_error on a bad magic, kind or size.
GridFunction read_function_cshb(const std::filesystem::path& path, const GridSpec& window);
Eigen::MatrixXcd read_operator_cshb(const std::filesystem::path& path, CshbHeader* header = nullptr);

/// Columns n,p,t,z,re,im with one row per sample in (n, p) order.
void write_function_csv(const std::filesystem::path& path, const GridFunction& u);
/// Reads the columns written above; every (n, p) of g must appear exactly once.
GridFunction read_function_csv(const std::filesystem::path& path, const GridSpec& g);

}  // namespace conic_shubin
