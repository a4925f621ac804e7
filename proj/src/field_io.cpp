#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fkp/error.hpp"
#include "fkp/spectral.hpp"

namespace fkp {
namespace {

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return __builtin_bswap64(v);
  }
}

void put(std::ostream& os, double d) {
  const std::uint64_t le = to_le(std::bit_cast<std::uint64_t>(d));
  os.write(reinterpret_cast<const char*>(&le), sizeof le);
}

double get(std::istream& is) {
  std::uint64_t le = 0;
  is.read(reinterpret_cast<char*>(&le), sizeof le);
  return std::bit_cast<double>(to_le(le));
}

}  // namespace

void save_field(const std::string& path, const Field& u) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  const Grid2D& g = u.grid();
  char header[256];
  std::snprintf(header, sizeof header, "FKPFIELD v1 %d %d %.17g %.17g %s\n", g.nx(), g.ny(), g.lx(),
                g.ly(), to_string(u.space()));
  os << header;
  if (u.is_real()) {
    for (double v : u.values()) put(os, v);
  } else {
    for (const Complex& c : u.coeffs()) {
      put(os, c.real());
      put(os, c.imag());
    }
  }
  if (!os) throw IoError("write failed for " + path);
}

Field load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw IoError(path + ": missing header");
  std::istringstream hs(line);
  std::string magic, version, lx_text, ly_text, tag;
  int nx = 0, ny = 0;
  hs >> magic >> version >> nx >> ny >> lx_text >> ly_text >> tag;
  if (!hs || magic != "FKPFIELD" || version != "v1") throw IoError(path + ": not an FKPFIELD v1 file");
  const double lx = std::strtod(lx_text.c_str(), nullptr);
  const double ly = std::strtod(ly_text.c_str(), nullptr);
  const Grid2D g = Grid2D::make(nx, ny, lx, ly);
  if (tag == "real") {
    std::vector<double> v(g.size());
    for (auto& x : v) x = get(is);
    if (!is) throw IoError(path + ": truncated payload");
    return Field::real(g, std::move(v));
  }
  if (tag == "spectral") {
    std::vector<Complex> c(g.size());
    for (auto& z : c) {
      const double re = get(is);
      const double im = get(is);
      z = {re, im};
    }
    if (!is) throw IoError(path + ": truncated payload");
    return Field::spectral(g, std::move(c));
  }
  throw IoError(path + ": unknown space tag '" + tag + "'");
}

}  // namespace fkp
