#pragma once

// NPY version 1.0 reader/writer for little-endian float32/float64 arrays
// with one to three axes, C order only.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace lvc {

enum class Dtype { Float32LE, Float64LE };

std::size_t element_size(Dtype dtype);

struct ArrayFile {
  Dtype dtype = Dtype::Float32LE;
  std::vector<std::size_t> shape;
  std::vector<std::uint8_t> payload;  // little-endian, row-major

  std::size_t element_count() const;

  static ArrayFile from_float32(std::vector<std::size_t> shape, std::span<const float> values);
  static ArrayFile from_float64(std::vector<std::size_t> shape, std::span<const double> values);

  /// Values as float32; float64 payloads are rounded to nearest-even.
  std::vector<float> to_float32() const;
  std::vector<double> to_float64() const;
};

/// Header dictionary text without padding, e.g.
/// "{'descr': '<f4', 'fortran_order': False, 'shape': (2, 3), }".
std::string npy_header_dict(const ArrayFile& array);

std::vector<std::uint8_t> encode_npy(const ArrayFile& array);
ArrayFile decode_npy(std::span<const std::uint8_t> bytes);

ArrayFile read_npy(const std::filesystem::path& path);
void write_npy(const std::filesystem::path& path, const ArrayFile& array);

/// Frame structure travelling next to a flattened (frames*tokens) x dim array.
struct Sidecar {
  std::size_t frames = 0;
  std::size_t tokens_per_frame = 0;
  std::size_t dim = 0;

  bool operator==(const Sidecar&) const = default;
};

Sidecar read_sidecar(const std::filesystem::path& path);
void write_sidecar(const std::filesystem::path& path, const Sidecar& sidecar);

}  // namespace lvc
