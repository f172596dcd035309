#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "mildflow/field.hpp"

namespace mildflow {

/// MFLD binary field snapshot.
///
/// Layout (little-endian throughout):
///   bytes 0-3   magic "MFLD"
///   u16         format version (currently 1)
///   u16         spatial dimension
///   u32         samples per axis N
///   u8          role (0 generic, 1 velocity, 2 director)
///   f64[]       physical samples, component-major, each component in
///               row-major axis order (last axis fastest)
///
/// The component count is implied by the payload length. The period is not
/// stored; readers pass it in (default 2*pi).
namespace mfld {
inline constexpr char kMagic[4] = {'M', 'F', 'L', 'D'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 13;
}  // namespace mfld

std::vector<std::uint8_t> encode_snapshot(const VectorField& field);
VectorField decode_snapshot(const std::vector<std::uint8_t>& bytes,
                            double period = 2.0 * std::numbers::pi);

/// Writes atomically (temporary file then rename).
void write_snapshot(const VectorField& field, const std::filesystem::path& path);
VectorField read_snapshot(const std::filesystem::path& path,
                          double period = 2.0 * std::numbers::pi);

/// Writes `bytes` to `path` through a sibling temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace mildflow
