#include "lvc/npy.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "lvc/error.hpp"
#include "lvc/report.hpp"

namespace lvc {
namespace {

constexpr std::uint8_t kMagic[] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kPreamble = 10;  // magic + version + header length
constexpr std::size_t kAlign = 64;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void store_le(std::span<const T> values, std::vector<std::uint8_t>& out) {
  out.resize(values.size() * sizeof(T));
  std::memcpy(out.data(), values.data(), out.size());
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < out.size(); i += sizeof(T)) {
      std::reverse(out.begin() + i, out.begin() + i + sizeof(T));
    }
  }
}

template <typename T>
std::vector<T> load_le(const std::vector<std::uint8_t>& bytes) {
  std::vector<std::uint8_t> tmp = bytes;
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < tmp.size(); i += sizeof(T)) {
      std::reverse(tmp.begin() + i, tmp.begin() + i + sizeof(T));
    }
  }
  std::vector<T> values(tmp.size() / sizeof(T));
  std::memcpy(values.data(), tmp.data(), values.size() * sizeof(T));
  return values;
}

void check_shape(const std::vector<std::size_t>& shape) {
  if (shape.empty() || shape.size() > 3) {
    throw Error(ErrorCode::UnsupportedShape,
                "arrays need 1 to 3 axes, got " + std::to_string(shape.size()));
  }
}

// Minimal parser for the Python-literal header dictionary.
class HeaderParser {
 public:
  explicit HeaderParser(std::string_view text) : text_(text) {}

  void parse(std::string& descr, std::optional<bool>& fortran,
             std::optional<std::vector<std::size_t>>& shape) {
    expect('{');
    while (true) {
      skip_ws();
      if (peek() == '}') {
        ++pos_;
        break;
      }
      const std::string key = quoted();
      expect(':');
      if (key == "descr") {
        descr = quoted();
      } else if (key == "fortran_order") {
        fortran = boolean();
      } else if (key == "shape") {
        shape = tuple();
      } else {
        fail("unexpected key '" + key + "'");
      }
      skip_ws();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != '}') {
        fail("expected ',' or '}'");
      }
    }
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after dictionary");
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::MalformedHeader, why + " at offset " + std::to_string(pos_));
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string quoted() {
    skip_ws();
    const char q = peek();
    if (q != '\'' && q != '"') fail("expected quoted string");
    const std::size_t end = text_.find(q, pos_ + 1);
    if (end == std::string_view::npos) fail("unterminated string");
    std::string s(text_.substr(pos_ + 1, end - pos_ - 1));
    pos_ = end + 1;
    return s;
  }
  bool boolean() {
    skip_ws();
    if (text_.substr(pos_, 4) == "True") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "False") {
      pos_ += 5;
      return false;
    }
    fail("expected True or False");
  }
  std::vector<std::size_t> tuple() {
    expect('(');
    std::vector<std::size_t> dims;
    while (true) {
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        return dims;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected dimension");
      std::size_t value = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        value = value * 10 + static_cast<std::size_t>(text_[pos_++] - '0');
      }
      dims.push_back(value);
      skip_ws();
      if (peek() == ',') ++pos_;
      else if (peek() != ')') fail("expected ',' or ')'");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t element_size(Dtype dtype) { return dtype == Dtype::Float32LE ? 4 : 8; }

std::size_t ArrayFile::element_count() const {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

ArrayFile ArrayFile::from_float32(std::vector<std::size_t> shape, std::span<const float> values) {
  ArrayFile a;
  a.dtype = Dtype::Float32LE;
  a.shape = std::move(shape);
  if (a.element_count() != values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "shape does not match value count");
  }
  store_le(values, a.payload);
  return a;
}

ArrayFile ArrayFile::from_float64(std::vector<std::size_t> shape, std::span<const double> values) {
  ArrayFile a;
  a.dtype = Dtype::Float64LE;
  a.shape = std::move(shape);
  if (a.element_count() != values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "shape does not match value count");
  }
  store_le(values, a.payload);
  return a;
}

std::vector<float> ArrayFile::to_float32() const {
  if (dtype == Dtype::Float32LE) return load_le<float>(payload);
  const auto wide = load_le<double>(payload);
  return {wide.begin(), wide.end()};
}

std::vector<double> ArrayFile::to_float64() const {
  if (dtype == Dtype::Float64LE) return load_le<double>(payload);
  const auto narrow = load_le<float>(payload);
  return {narrow.begin(), narrow.end()};
}

std::string npy_header_dict(const ArrayFile& array) {
  std::string shape = "(";
  for (std::size_t i = 0; i < array.shape.size(); ++i) {
    if (i > 0) shape += ", ";
    shape += std::to_string(array.shape[i]);
  }
  if (array.shape.size() == 1) shape += ",";
  shape += ")";
  const char* descr = array.dtype == Dtype::Float32LE ? "<f4" : "<f8";
  return std::string("{'descr': '") + descr + "', 'fortran_order': False, 'shape': " + shape +
         ", }";
}

std::vector<std::uint8_t> encode_npy(const ArrayFile& array) {
  check_shape(array.shape);
  if (array.payload.size() != array.element_count() * element_size(array.dtype)) {
    throw Error(ErrorCode::TruncatedPayload, "payload size does not match shape");
  }
  std::string header = npy_header_dict(array);
  const std::size_t unpadded = kPreamble + header.size() + 1;
  header.append((kAlign - unpadded % kAlign) % kAlign, ' ');
  header.push_back('\n');

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size() & 0xff));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), array.payload.begin(), array.payload.end());
  return out;
}

ArrayFile decode_npy(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 6 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw Error(ErrorCode::BadMagic, "not an NPY file");
  }
  if (bytes.size() < kPreamble) throw Error(ErrorCode::TruncatedPayload, "file ends inside preamble");
  if (bytes[6] != 1 || bytes[7] != 0) {
    throw Error(ErrorCode::UnsupportedVersion, "NPY version " + std::to_string(bytes[6]) + "." +
                                                   std::to_string(bytes[7]) +
                                                   " (only 1.0 supported)");
  }
  const std::size_t header_len = bytes[8] | (static_cast<std::size_t>(bytes[9]) << 8);
  if (bytes.size() < kPreamble + header_len) {
    throw Error(ErrorCode::TruncatedPayload, "file ends inside header");
  }
  std::string_view header(reinterpret_cast<const char*>(bytes.data()) + kPreamble, header_len);
  if (header.empty() || header.back() != '\n') {
    throw Error(ErrorCode::MalformedHeader, "header is not newline-terminated");
  }

  std::string descr;
  std::optional<bool> fortran;
  std::optional<std::vector<std::size_t>> shape;
  HeaderParser(header.substr(0, header.size() - 1)).parse(descr, fortran, shape);
  if (descr.empty() || !fortran || !shape) {
    throw Error(ErrorCode::MalformedHeader, "header lacks descr, fortran_order or shape");
  }

  ArrayFile a;
  if (descr == "<f4") a.dtype = Dtype::Float32LE;
  else if (descr == "<f8") a.dtype = Dtype::Float64LE;
  else throw Error(ErrorCode::UnsupportedDtype, "dtype '" + descr + "' (only <f4 and <f8)");
  if (*fortran) throw Error(ErrorCode::FortranOrderUnsupported, "Fortran-ordered arrays");
  a.shape = std::move(*shape);
  check_shape(a.shape);

  const std::size_t need = a.element_count() * element_size(a.dtype);
  const std::size_t have = bytes.size() - kPreamble - header_len;
  if (have < need) {
    throw Error(ErrorCode::TruncatedPayload, "expected " + std::to_string(need) +
                                                 " payload bytes, found " + std::to_string(have));
  }
  const auto* begin = bytes.data() + kPreamble + header_len;
  a.payload.assign(begin, begin + need);
  return a;
}

ArrayFile read_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoFailure, "failed reading " + path.string());
  try {
    return decode_npy(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + std::string(e.what()));
  }
}

void write_npy(const std::filesystem::path& path, const ArrayFile& array) {
  const auto bytes = encode_npy(array);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "failed writing " + path.string());
}

Sidecar read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    Sidecar s{j.at("frames").get<std::size_t>(), j.at("tokens_per_frame").get<std::size_t>(),
              j.at("dim").get<std::size_t>()};
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedHeader, path.string() + ": invalid sidecar: " + e.what());
  }
}

void write_sidecar(const std::filesystem::path& path, const Sidecar& s) {
  write_report(path, {{"frames", s.frames}, {"tokens_per_frame", s.tokens_per_frame}, {"dim", s.dim}});
}

}  // namespace lvc
