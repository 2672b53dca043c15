#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rackkex {

using Bytes = std::vector<std::uint8_t>;

/// Error type thrown by all modules on contract violations.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

void put_u32be(Bytes& out, std::uint32_t v);
void put_i32be(Bytes& out, std::int32_t v);
void put_bytes(Bytes& out, std::span<const std::uint8_t> b);
void put_lp_bytes(Bytes& out, std::span<const std::uint8_t> b);  // u32 length prefix

/// Sequential reader over a byte buffer; throws Error on underrun.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint32_t u32be();
  std::int32_t i32be();
  Bytes take(std::size_t n);
  Bytes take_lp();  // u32 length-prefixed block
  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::string to_hex(std::span<const std::uint8_t> b);
Bytes from_hex(std::string_view hex);
std::string to_base64(std::span<const std::uint8_t> b);
Bytes from_base64(std::string_view b64);

inline Bytes str_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

}  // namespace rackkex
