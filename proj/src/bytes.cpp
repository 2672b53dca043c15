#include "rackkex/bytes.hpp"

#include <sodium.h>

namespace rackkex {

void put_u32be(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_i32be(Bytes& out, std::int32_t v) {
  put_u32be(out, static_cast<std::uint32_t>(v));
}

void put_bytes(Bytes& out, std::span<const std::uint8_t> b) {
  out.insert(out.end(), b.begin(), b.end());
}

void put_lp_bytes(Bytes& out, std::span<const std::uint8_t> b) {
  if (b.size() > 0xffffffffu) throw Error("byte block too large");
  put_u32be(out, static_cast<std::uint32_t>(b.size()));
  put_bytes(out, b);
}

std::uint32_t ByteReader::u32be() {
  if (remaining() < 4) throw Error("byte buffer underrun");
  std::uint32_t v = (static_cast<std::uint32_t>(data_[pos_]) << 24) |
                    (static_cast<std::uint32_t>(data_[pos_ + 1]) << 16) |
                    (static_cast<std::uint32_t>(data_[pos_ + 2]) << 8) |
                    static_cast<std::uint32_t>(data_[pos_ + 3]);
  pos_ += 4;
  return v;
}

std::int32_t ByteReader::i32be() {
  return static_cast<std::int32_t>(u32be());
}

Bytes ByteReader::take(std::size_t n) {
  if (remaining() < n) throw Error("byte buffer underrun");
  Bytes b(data_.begin() + pos_, data_.begin() + pos_ + n);
  pos_ += n;
  return b;
}

Bytes ByteReader::take_lp() {
  std::uint32_t n = u32be();
  return take(n);
}

std::string to_hex(std::span<const std::uint8_t> b) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(b.size() * 2);
  for (std::uint8_t x : b) {
    s.push_back(digits[x >> 4]);
    s.push_back(digits[x & 0xf]);
  }
  return s;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error("hex string has odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error("invalid hex digit");
  };
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  }
  return out;
}

std::string to_base64(std::span<const std::uint8_t> b) {
  std::string out(sodium_base64_encoded_len(b.size(), sodium_base64_VARIANT_ORIGINAL), '\0');
  sodium_bin2base64(out.data(), out.size(), b.data(), b.size(), sodium_base64_VARIANT_ORIGINAL);
  out.resize(out.find('\0') == std::string::npos ? out.size() : out.find('\0'));
  return out;
}

Bytes from_base64(std::string_view b64) {
  Bytes out(b64.size(), 0);
  std::size_t out_len = 0;
  if (sodium_base642bin(out.data(), out.size(), b64.data(), b64.size(), nullptr, &out_len,
                        nullptr, sodium_base64_VARIANT_ORIGINAL) != 0) {
    throw Error("invalid base64");
  }
  out.resize(out_len);
  return out;
}

}  // namespace rackkex
