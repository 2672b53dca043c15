#include "rackkex/crypto.hpp"

#include <sodium.h>

namespace rackkex::crypto {

void init() {
  if (sodium_init() < 0) throw Error("libsodium initialization failed");
}

Bytes sha256(std::span<const std::uint8_t> data) {
  init();
  Bytes out(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Bytes hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data) {
  init();
  Bytes out(crypto_auth_hmacsha256_BYTES);
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, data.data(), data.size());
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

SigningKey signing_key_from_seed(std::span<const std::uint8_t> seed32) {
  init();
  if (seed32.size() != kSeedSize) throw Error("signing seed must be 32 bytes");
  SigningKey key;
  key.public_key.resize(crypto_sign_ed25519_PUBLICKEYBYTES);
  key.secret_key.resize(crypto_sign_ed25519_SECRETKEYBYTES);
  crypto_sign_ed25519_seed_keypair(key.public_key.data(), key.secret_key.data(), seed32.data());
  return key;
}

Bytes sign_detached(const SigningKey& key, std::span<const std::uint8_t> msg) {
  init();
  if (key.secret_key.size() != kSecretKeySize) throw Error("bad signing key");
  Bytes sig(crypto_sign_ed25519_BYTES);
  crypto_sign_ed25519_detached(sig.data(), nullptr, msg.data(), msg.size(),
                               key.secret_key.data());
  return sig;
}

bool verify_detached(std::span<const std::uint8_t> public_key32,
                     std::span<const std::uint8_t> msg,
                     std::span<const std::uint8_t> signature64) {
  init();
  if (public_key32.size() != kPublicKeySize || signature64.size() != kSignatureSize) return false;
  return crypto_sign_ed25519_verify_detached(signature64.data(), msg.data(), msg.size(),
                                             public_key32.data()) == 0;
}

}  // namespace rackkex::crypto
