#include "bhblow/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "bhblow/error.hpp"

namespace bhblow {
namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

constexpr char kMagic[4] = {'B', 'H', 'F', '1'};

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field& u, double t) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  put<std::uint64_t>(os, u.grid().n());
  put<double>(os, u.grid().half_width());
  put<double>(os, t);
  os.write(reinterpret_cast<const char*>(u.samples().data()),
           static_cast<std::streamsize>(u.size() * sizeof(double)));
  if (!os) throw IoError("write failed: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError(path.string() + ": not a BHF1 snapshot");
  const auto n = get<std::uint64_t>(is);
  const auto L = get<double>(is);
  const auto t = get<double>(is);
  if (!is || n < 16 || n > (std::uint64_t{1} << 30)) throw IoError(path.string() + ": bad header");
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw IoError(path.string() + ": truncated sample block");
  return {t, Field(make_grid(n, L), std::move(v))};
}

}  // namespace bhblow
