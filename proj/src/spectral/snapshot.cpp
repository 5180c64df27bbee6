#include "bmhd/spectral/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "bmhd/common/error.hpp"

namespace bmhd {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {
constexpr char kMagic[5] = {'B', 'M', 'H', 'D', '1'};
constexpr std::size_t kHeader = 5 + 4 + 4 + 8;
}  // namespace

void save_snapshot(const std::string& path, const std::vector<SpectralField>& fields) {
  require(!fields.empty(), ErrorKind::Input, "snapshot needs at least one field");
  const Grid g = fields.front().grid;
  for (const auto& f : fields) require(f.grid == g, ErrorKind::Dimension, "snapshot fields on different grids");
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorKind::Io, "cannot open " + path + " for writing");
  const std::int32_t d = g.dim, n = g.n;
  const double L = g.length;
  os.write(kMagic, 5);
  os.write(reinterpret_cast<const char*>(&d), 4);
  os.write(reinterpret_cast<const char*>(&n), 4);
  os.write(reinterpret_cast<const char*>(&L), 8);
  for (const auto& f : fields)
    os.write(reinterpret_cast<const char*>(f.c.data()), static_cast<std::streamsize>(f.size() * sizeof(cplx)));
  require(static_cast<bool>(os), ErrorKind::Io, "write failed for " + path);
}

std::vector<SpectralField> load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  require(static_cast<bool>(is), ErrorKind::Io, "cannot open " + path);
  const auto bytes = static_cast<std::size_t>(is.tellg());
  is.seekg(0);
  require(bytes >= kHeader, ErrorKind::Parse, path + ": truncated header");
  char magic[5];
  std::int32_t d = 0, n = 0;
  double L = 0.0;
  is.read(magic, 5);
  require(std::memcmp(magic, kMagic, 5) == 0, ErrorKind::Parse, path + ": bad magic");
  is.read(reinterpret_cast<char*>(&d), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&L), 8);
  const Grid g = Grid::make(d, n, L);
  const std::size_t per = g.size() * sizeof(cplx);
  const std::size_t payload = bytes - kHeader;
  require(payload > 0 && payload % per == 0, ErrorKind::Parse, path + ": payload is not a whole number of fields");
  std::vector<SpectralField> out(payload / per, SpectralField(g));
  for (auto& f : out) is.read(reinterpret_cast<char*>(f.c.data()), static_cast<std::streamsize>(per));
  require(static_cast<bool>(is), ErrorKind::Io, "read failed for " + path);
  return out;
}

void save_state(const std::string& path, const StateVector& s) { save_snapshot(path, s.f); }

StateVector load_state(const std::string& path) {
  auto fields = load_snapshot(path);
  const Grid g = fields.front().grid;
  require(static_cast<int>(fields.size()) == 1 + 2 * g.dim, ErrorKind::Parse,
          path + ": expected 1+2d fields for a state snapshot");
  StateVector s(g);
  s.f = std::move(fields);
  return s;
}

}  // namespace bmhd
