// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/message_codec.hpp"

#include <cmath>
#include <cstring>
#include <numeric>

#include "nstego/error.hpp"
#include "nstego/random.hpp"

namespace nstego {
namespace {

constexpr std::array<std::uint8_t, 4> kKeyMagic{'P', 'R', 'D', 'K'};

void put_u64(std::uint8_t* out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out[b] = static_cast<std::uint8_t>(v >> (8 * b));
}

std::uint64_t get_u64(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | in[b];
  return v;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void check_key(const StegoKey& key) {
  if (key.block_size < 2 || key.block_size > 0xffff) {
    throw ConfigError("block_size must be in [2, 65535], got " + std::to_string(key.block_size));
  }
}

}  // namespace

KeyRecord serialize_key(const StegoKey& key) {
  check_key(key);
  KeyRecord r{};
  std::memcpy(r.data(), kKeyMagic.data(), kKeyMagic.size());
  r[4] = kGeneratorVersion;
  r[5] = static_cast<std::uint8_t>(key.block_size & 0xff);
  r[6] = static_cast<std::uint8_t>(key.block_size >> 8);
  r[7] = 0;
  put_u64(r.data() + 8, key.matrix_seed);
  put_u64(r.data() + 16, key.magnitude_seed);
  put_u64(r.data() + 24, key.shuffle_seed);
  return r;
}

StegoKey parse_key(std::span<const std::uint8_t> record) {
  if (record.size() != kKeyRecordSize) {
    throw FormatError("key record must be 32 bytes, got " + std::to_string(record.size()));
  }
  if (std::memcmp(record.data(), kKeyMagic.data(), kKeyMagic.size()) != 0) {
    throw FormatError("key record has bad magic (expected PRDK)");
  }
  if (record[4] != kGeneratorVersion) {
    throw FormatError("unsupported key version " + std::to_string(record[4]));
  }
  StegoKey key;
  key.block_size = record[5] | (record[6] << 8);
  key.matrix_seed = get_u64(record.data() + 8);
  key.magnitude_seed = get_u64(record.data() + 16);
  key.shuffle_seed = get_u64(record.data() + 24);
  if (key.block_size < 2) throw FormatError("key block size must be >= 2");
  return key;
}

std::string key_to_hex(const StegoKey& key) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const KeyRecord r = serialize_key(key);
  std::string out;
  out.reserve(2 * r.size());
  for (std::uint8_t b : r) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

StegoKey key_from_hex(std::string_view hex) {
  if (hex.size() != 2 * kKeyRecordSize) {
    throw FormatError("hex key must be 64 characters, got " + std::to_string(hex.size()));
  }
  KeyRecord r{};
  for (std::size_t i = 0; i < r.size(); ++i) {
    const int hi = hex_digit(hex[2 * i]);
    const int lo = hex_digit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw FormatError("hex key contains a non-hex character");
    r[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return parse_key(r);
}

OrthogonalMatrix generate_orthogonal(std::uint64_t matrix_seed, int n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "orthogonal matrix size must be >= 2");
  Rng rng = Rng::stream(matrix_seed, "orthogonal");
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const auto& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

MessageBits::MessageBits(int blocks, int block_size)
    : MessageBits(blocks, block_size,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(blocks, 0)) *
                                            std::max(block_size, 0) * std::max(block_size, 0))) {}

MessageBits::MessageBits(int blocks, int block_size, std::vector<std::uint8_t> bits)
    : blocks_(blocks), block_size_(block_size), bits_(std::move(bits)) {
  if (blocks < 1) throw Error(ErrorCode::kInvalidArgument, "message needs at least one block");
  if (block_size < 2) throw Error(ErrorCode::kInvalidArgument, "block size must be >= 2");
  const std::size_t expected =
      static_cast<std::size_t>(blocks) * block_size * static_cast<std::size_t>(block_size);
  if (bits_.size() != expected) {
    throw ShapeError("message has " + std::to_string(bits_.size()) + " bits, expected " +
                     std::to_string(expected));
  }
  for (std::uint8_t b : bits_) {
    if (b > 1) throw Error(ErrorCode::kInvalidArgument, "message bits must be 0 or 1");
  }
}

MessageBits MessageBits::random(int blocks, int block_size, std::uint64_t seed) {
  MessageBits m(blocks, block_size);
  Rng rng = Rng::stream(seed, "message");
  for (auto& b : m.bits_) b = rng.bit() ? 1 : 0;
  return m;
}

int max_blocks(LatentShape shape, int block_size) {
  const long long per_block = static_cast<long long>(block_size) * block_size;
  return static_cast<int>(shape.size() / per_block);
}

MessageBits payload_from_bits(std::span<const std::uint8_t> bits, int blocks,
                              const StegoKey& key) {
  MessageBits m(blocks, key.block_size);
  const std::size_t capacity = m.size();
  if (bits.size() > capacity) {
    throw CapacityError("message of " + std::to_string(bits.size()) +
                            " bits exceeds payload capacity of " + std::to_string(capacity) +
                            " bits",
                        static_cast<long long>(capacity));
  }
  auto out = m.bits();
  std::size_t k = 0;
  for (std::uint8_t b : bits) {
    if (b > 1) throw Error(ErrorCode::kInvalidArgument, "message bits must be 0 or 1");
    out[k++] = b;
  }
  Rng filler = Rng::stream(key.magnitude_seed, "filler");
  for (; k < capacity; ++k) out[k] = filler.bit() ? 1 : 0;
  return m;
}

MessageBits bits_from_bytes(std::span<const std::uint8_t> bytes, int blocks,
                            const StegoKey& key) {
  std::vector<std::uint8_t> bits;
  bits.reserve(bytes.size() * 8);
  for (std::uint8_t byte : bytes) {
    for (int b = 7; b >= 0; --b) bits.push_back((byte >> b) & 1);
  }
  return payload_from_bits(bits, blocks, key);
}

std::vector<std::uint8_t> bytes_from_bits(const MessageBits& bits) {
  const auto b = bits.bits();
  std::vector<std::uint8_t> out(b.size() / 8, 0);
  for (std::size_t i = 0; i < out.size() * 8; ++i) {
    out[i / 8] = static_cast<std::uint8_t>(out[i / 8] | (b[i] << (7 - i % 8)));
  }
  return out;
}

std::vector<Eigen::MatrixXd> bits_to_signed_gaussian(const MessageBits& m,
                                                     std::uint64_t magnitude_seed) {
  Rng rng = Rng::stream(magnitude_seed, "magnitude");
  const int n = m.block_size();
  std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(m.blocks()),
                                      Eigen::MatrixXd(n, n));
  for (int c = 0; c < m.blocks(); ++c) {
    auto& g = blocks[static_cast<std::size_t>(c)];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double mag = std::abs(rng.gaussian());
        g(i, j) = m.at(c, i, j) ? mag : -mag;
      }
    }
  }
  return blocks;
}

std::vector<std::size_t> shuffle_permutation(std::uint64_t shuffle_seed, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng = Rng::stream(shuffle_seed, "shuffle");
  for (std::size_t k = n; k > 1; --k) {
    const auto j = static_cast<std::size_t>(rng.below(k));
    std::swap(perm[k - 1], perm[j]);
  }
  return perm;
}

Tensor embed(const MessageBits& m, const StegoKey& key, LatentShape shape) {
  check_key(key);
  if (m.block_size() != key.block_size) {
    throw ShapeError("message block size " + std::to_string(m.block_size()) +
                     " does not match key block size " + std::to_string(key.block_size));
  }
  if (shape.rows < 1 || shape.cols < 1) throw ShapeError("latent shape must be positive");
  const int c_max = max_blocks(shape, key.block_size);
  if (m.blocks() > c_max) {
    const long long max_bits = static_cast<long long>(c_max) * key.block_size * key.block_size;
    throw CapacityError("payload of " + std::to_string(m.size()) + " bits exceeds capacity; max " +
                            std::to_string(max_bits) + " bits (" + std::to_string(c_max) +
                            " blocks of " + std::to_string(key.block_size) + "x" +
                            std::to_string(key.block_size) + ")",
                        max_bits);
  }
  const int n = key.block_size;
  const OrthogonalMatrix a = generate_orthogonal(key.matrix_seed, n);
  const auto blocks = bits_to_signed_gaussian(m, key.magnitude_seed);

  const auto total = static_cast<std::size_t>(shape.size());
  std::vector<double> flat;
  flat.reserve(total);
  for (const auto& g : blocks) {
    const Eigen::MatrixXd projected = a * g * a.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) flat.push_back(projected(i, j));
  }
  Rng padding = Rng::stream(key.magnitude_seed, "padding");
  while (flat.size() < total) flat.push_back(padding.gaussian());

  const auto perm = shuffle_permutation(key.shuffle_seed, total);
  Tensor z(shape.rows, shape.cols);
  double* out = z.data();
  for (std::size_t k = 0; k < total; ++k) out[k] = flat[perm[k]];
  return z;
}

MessageBits extract(const Tensor& z_hat, const StegoKey& key, int blocks) {
  check_key(key);
  const LatentShape shape{static_cast<int>(z_hat.rows()), static_cast<int>(z_hat.cols())};
  const int n = key.block_size;
  if (blocks < 1 || blocks > max_blocks(shape, n)) {
    throw ShapeError("block count " + std::to_string(blocks) + " inconsistent with latent " +
                     std::to_string(shape.rows) + "x" + std::to_string(shape.cols) +
                     " and block size " + std::to_string(n));
  }
  const auto total = static_cast<std::size_t>(shape.size());
  const auto perm = shuffle_permutation(key.shuffle_seed, total);
  std::vector<double> flat(total);
  const double* in = z_hat.data();
  for (std::size_t k = 0; k < total; ++k) flat[perm[k]] = in[k];

  const OrthogonalMatrix a = generate_orthogonal(key.matrix_seed, n);
  MessageBits m(blocks, n);
  Eigen::MatrixXd block(n, n);
  for (int c = 0; c < blocks; ++c) {
    const std::size_t base = static_cast<std::size_t>(c) * n * n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) block(i, j) = flat[base + static_cast<std::size_t>(i) * n + j];
    const Eigen::MatrixXd g = a.transpose() * block * a;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.set(c, i, j, g(i, j) > 0.0);
  }
  return m;
}

double bit_error_rate(const MessageBits& m, const MessageBits& m_hat) {
  if (m.blocks() != m_hat.blocks() || m.block_size() != m_hat.block_size()) {
    throw ShapeError("bit_error_rate needs identically shaped messages");
  }
  const auto a = m.bits();
  const auto b = m_hat.bits();
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

}  // namespace nstego
