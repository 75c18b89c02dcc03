#include "conic_shubin/grid_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <unistd.h>

namespace conic_shubin {

namespace {

constexpr std::array<char, 4> kMagic{'C', 'S', 'H', 'B'};

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

void put_u32(std::string& out, std::uint32_t v) {
  v = to_little(v);
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::string& out, double v) {
  v = to_little(v);
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

std::string header_bytes(std::uint32_t nt, std::uint32_t nz, CshbKind kind) {
  std::string out(kMagic.begin(), kMagic.end());
  put_u32(out, nt);
  put_u32(out, nz);
  put_u32(out, static_cast<std::uint32_t>(kind));
  return out;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint32_t get_u32(const std::string& bytes, std::size_t offset) {
  std::uint32_t v;
  std::memcpy(&v, bytes.data() + offset, sizeof v);
  return to_little(v);
}

double get_f64(const std::string& bytes, std::size_t offset) {
  double v;
  std::memcpy(&v, bytes.data() + offset, sizeof v);
  return to_little(v);
}

CshbHeader parse_header(const std::string& bytes, const std::filesystem::path& path) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic.data(), 4) != 0)
    throw std::runtime_error(path.string() + ": not a CSHB file");
  CshbHeader h{get_u32(bytes, 4), get_u32(bytes, 8), static_cast<CshbKind>(get_u32(bytes, 12))};
  if (h.kind != CshbKind::Function && h.kind != CshbKind::Operator)
    throw std::runtime_error(path.string() + ": unknown CSHB kind " + std::to_string(get_u32(bytes, 12)));
  return h;
}

std::size_t payload_count(const CshbHeader& h) {
  const std::size_t n = std::size_t(h.nt) * h.nz;
  return h.kind == CshbKind::Function ? n : n * n;
}

std::string check_payload(const std::filesystem::path& path, CshbHeader* out, CshbKind want) {
  std::string bytes = read_all(path);
  const CshbHeader h = parse_header(bytes, path);
  if (h.kind != want) throw std::runtime_error(path.string() + ": unexpected CSHB kind");
  if (bytes.size() != 16 + 16 * payload_count(h))
    throw std::runtime_error(path.string() + ": payload size does not match the header");
  if (out) *out = h;
  return bytes;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

void write_function_cshb(const std::filesystem::path& path, const GridFunction& u) {
  const auto& g = u.grid();
  std::string out = header_bytes(std::uint32_t(g.nt), std::uint32_t(g.nz), CshbKind::Function);
  out.reserve(16 + 16 * std::size_t(g.size()));
  for (int n = 0; n < g.nt; ++n)
    for (int p = 0; p < g.nz; ++p) {
      put_f64(out, u(n, p).real());
      put_f64(out, u(n, p).imag());
    }
  write_file_atomic(path, out);
}

void write_operator_cshb(const std::filesystem::path& path, const GridOperator& A) {
  const auto& g = A.grid();
  const Eigen::MatrixXcd d = A.dense();
  std::string out = header_bytes(std::uint32_t(g.nt), std::uint32_t(g.nz), CshbKind::Operator);
  out.reserve(16 + 16 * std::size_t(d.size()));
  for (Eigen::Index r = 0; r < d.rows(); ++r)
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
      put_f64(out, d(r, c).real());
      put_f64(out, d(r, c).imag());
    }
  write_file_atomic(path, out);
}

CshbHeader read_cshb_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string bytes(16, '\0');
  in.read(bytes.data(), 16);
  bytes.resize(static_cast<std::size_t>(in.gcount()));
  return parse_header(bytes, path);
}

GridFunction read_function_cshb(const std::filesystem::path& path, const GridSpec& window) {
  CshbHeader h;
  const std::string bytes = check_payload(path, &h, CshbKind::Function);
  GridSpec g = window;
  g.nt = int(h.nt);
  g.nz = int(h.nz);
  g.validate();
  GridFunction u(g);
  std::size_t off = 16;
  for (int n = 0; n < g.nt; ++n)
    for (int p = 0; p < g.nz; ++p, off += 16) u(n, p) = cplx(get_f64(bytes, off), get_f64(bytes, off + 8));
  return u;
}

Eigen::MatrixXcd read_operator_cshb(const std::filesystem::path& path, CshbHeader* header) {
  CshbHeader h;
  const std::string bytes = check_payload(path, &h, CshbKind::Operator);
  const Eigen::Index n = Eigen::Index(h.nt) * h.nz;
  Eigen::MatrixXcd d(n, n);
  std::size_t off = 16;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c, off += 16) d(r, c) = cplx(get_f64(bytes, off), get_f64(bytes, off + 8));
  if (header) *header = h;
  return d;
}

void write_function_csv(const std::filesystem::path& path, const GridFunction& u) {
  const auto& g = u.grid();
  std::string out = "n,p,t,z,re,im\n";
  for (int n = 0; n < g.nt; ++n)
    for (int p = 0; p < g.nz; ++p) {
      out += std::to_string(n) + ',' + std::to_string(p) + ',' + format_double(g.t(n)) + ',' + format_double(g.z(p)) +
             ',' + format_double(u(n, p).real()) + ',' + format_double(u(n, p).imag()) + '\n';
    }
  write_file_atomic(path, out);
}

GridFunction read_function_csv(const std::filesystem::path& path, const GridSpec& g) {
  g.validate();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,p,", 0) != 0)
    throw std::runtime_error(path.string() + ": expected header n,p,t,z,re,im");
  GridFunction u(g);
  std::vector<char> seen(std::size_t(g.size()), 0);
  int lineno = 1;
  auto field = [&](const std::string& s, double& v) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad number '" + s + "'");
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() != 6) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 6 columns");
    double n, p, re, im, unused;
    field(cols[0], n), field(cols[1], p), field(cols[2], unused), field(cols[3], unused), field(cols[4], re),
        field(cols[5], im);
    if (n < 0 || n >= g.nt || p < 0 || p >= g.nz || n != std::floor(n) || p != std::floor(p))
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": index outside the grid");
    auto& s = seen[std::size_t(n) * std::size_t(g.nz) + std::size_t(p)];
    if (s) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": duplicate sample");
    s = 1;
    u(int(n), int(p)) = cplx(re, im);
  }
  for (char s : seen)
    if (!s) throw std::runtime_error(path.string() + ": missing samples");
  return u;
}

}  // namespace conic_shubin
