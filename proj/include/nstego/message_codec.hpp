// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nstego/tensor.hpp"

namespace nstego {

struct StegoKey {
  std::uint64_t matrix_seed = 0;
  std::uint64_t magnitude_seed = 0;
  std::uint64_t shuffle_seed = 0;
  int block_size = 8;  // N

  bool operator==(const StegoKey&) const = default;
};

inline constexpr std::size_t kKeyRecordSize = 32;
using KeyRecord = std::array<std::uint8_t, kKeyRecordSize>;

// 32-byte record: "PRDK", version, u16 N (LE), reserved, three u64 seeds (LE).
KeyRecord serialize_key(const StegoKey& key);
StegoKey parse_key(std::span<const std::uint8_t> record);
std::string key_to_hex(const StegoKey& key);
StegoKey key_from_hex(std::string_view hex);

using OrthogonalMatrix = Eigen::MatrixXd;

OrthogonalMatrix generate_orthogonal(std::uint64_t matrix_seed, int n);

// C x N x N bit payload; blocks are stored flat as [block][row][col].
class MessageBits {
 public:
  MessageBits(int blocks, int block_size);
  MessageBits(int blocks, int block_size, std::vector<std::uint8_t> bits);

  static MessageBits random(int blocks, int block_size, std::uint64_t seed);

  int blocks() const { return blocks_; }
  int block_size() const { return block_size_; }
  std::size_t size() const { return bits_.size(); }

  std::uint8_t at(int c, int i, int j) const {
    return bits_[index(c, i, j)];
  }
  void set(int c, int i, int j, bool v) { bits_[index(c, i, j)] = v ? 1 : 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> bits() { return bits_; }

  bool operator==(const MessageBits&) const = default;

 private:
  std::size_t index(int c, int i, int j) const {
    return (static_cast<std::size_t>(c) * block_size_ + i) * block_size_ + j;
  }

  int blocks_;
  int block_size_;
  std::vector<std::uint8_t> bits_;
};

// Pads an arbitrary-length bit string to `blocks` blocks with keyed filler
// bits. Throws CapacityError when it does not fit.
MessageBits payload_from_bits(std::span<const std::uint8_t> bits, int blocks, const StegoKey& key);

// Unpack bytes MSB first into a payload of `blocks` blocks. Bits beyond the
// message length are filled from a keyed stream. Throws CapacityError when the
// message does not fit.
MessageBits bits_from_bytes(std::span<const std::uint8_t> bytes, int blocks, const StegoKey& key);
std::vector<std::uint8_t> bytes_from_bits(const MessageBits& bits);

// Largest whole number of N x N blocks that fits the latent.
int max_blocks(LatentShape shape, int block_size);

// Entry (c, i, j) = s * |g|, s = +1 for bit 1 and -1 for bit 0. Returned as C
// stacked N x N blocks.
std::vector<Eigen::MatrixXd> bits_to_signed_gaussian(const MessageBits& m,
                                                     std::uint64_t magnitude_seed);

// Keyed Fisher-Yates permutation of [0, n): shuffled[k] = v[perm[k]].
std::vector<std::size_t> shuffle_permutation(std::uint64_t shuffle_seed, std::size_t n);

Tensor embed(const MessageBits& m, const StegoKey& key, LatentShape shape);

MessageBits extract(const Tensor& z_hat, const StegoKey& key, int blocks);

double bit_error_rate(const MessageBits& m, const MessageBits& m_hat);

}  // namespace nstego
