#pragma once

#include "rackkex/bytes.hpp"

namespace rackkex::crypto {

inline constexpr std::size_t kHashSize = 32;
inline constexpr std::size_t kSeedSize = 32;
inline constexpr std::size_t kPublicKeySize = 32;
inline constexpr std::size_t kSecretKeySize = 64;
inline constexpr std::size_t kSignatureSize = 64;

void init();  // idempotent libsodium init

Bytes sha256(std::span<const std::uint8_t> data);
Bytes hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data);

struct SigningKey {
  Bytes public_key;  // 32 bytes
  Bytes secret_key;  // 64 bytes (libsodium expanded form)
};

SigningKey signing_key_from_seed(std::span<const std::uint8_t> seed32);
Bytes sign_detached(const SigningKey& key, std::span<const std::uint8_t> msg);
bool verify_detached(std::span<const std::uint8_t> public_key32,
                     std::span<const std::uint8_t> msg,
                     std::span<const std::uint8_t> signature64);

}  // namespace rackkex::crypto
