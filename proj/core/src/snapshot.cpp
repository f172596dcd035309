#include "mildflow/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mildflow/error.hpp"

namespace mildflow {

namespace {

static_assert(std::endian::native == std::endian::little,
              "MFLD encoding assumes a little-endian host");

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t offset) {
  T value;
  std::memcpy(&value, in.data() + offset, sizeof(T));
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const VectorField& field) {
  const auto& grid = field.grid();
  std::vector<std::uint8_t> out;
  out.reserve(mfld::kHeaderBytes + field.components() * grid.size() * sizeof(double));
  out.insert(out.end(), mfld::kMagic, mfld::kMagic + 4);
  put<std::uint16_t>(out, mfld::kVersion);
  put<std::uint16_t>(out, static_cast<std::uint16_t>(grid.dimension()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.modes_per_axis()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(field.role()));
  for (std::size_t c = 0; c < field.components(); ++c) {
    for (double v : field.physical(c)) put<double>(out, v);
  }
  return out;
}

VectorField decode_snapshot(const std::vector<std::uint8_t>& bytes, double period) {
  if (bytes.size() < mfld::kHeaderBytes) throw FormatError("MFLD: truncated header");
  if (std::memcmp(bytes.data(), mfld::kMagic, 4) != 0) throw FormatError("MFLD: bad magic");
  const auto version = get<std::uint16_t>(bytes, 4);
  if (version > mfld::kVersion) {
    throw FormatError("MFLD: unsupported version " + std::to_string(version));
  }
  if (version == 0) throw FormatError("MFLD: invalid version 0");
  const auto dimension = get<std::uint16_t>(bytes, 6);
  const auto points = get<std::uint32_t>(bytes, 8);
  const auto role_byte = get<std::uint8_t>(bytes, 12);
  if (role_byte > 2) throw FormatError("MFLD: unknown role " + std::to_string(role_byte));
  const auto role = static_cast<FieldRole>(role_byte);

  const SpectralGrid grid = make_grid(dimension, static_cast<int>(points), period);
  const std::size_t payload = bytes.size() - mfld::kHeaderBytes;
  const std::size_t per_component = grid.size() * sizeof(double);
  if (payload == 0 || payload % per_component != 0) throw FormatError("MFLD: truncated payload");
  const std::size_t components = payload / per_component;

  std::vector<std::vector<double>> samples(components, std::vector<double>(grid.size()));
  std::size_t offset = mfld::kHeaderBytes;
  for (auto& comp : samples) {
    std::memcpy(comp.data(), bytes.data() + offset, per_component);
    offset += per_component;
  }
  return VectorField::from_physical(grid, std::move(samples), role);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_snapshot(const VectorField& field, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(field);
  write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

VectorField read_snapshot(const std::filesystem::path& path, double period) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw NotFound("snapshot not found: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return decode_snapshot(bytes, period);
}

}  // namespace mildflow
