// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nstego {

inline constexpr std::uint8_t kTensorFormatVersion = 1;
inline constexpr std::uint8_t kDtypeF64 = 1;

// Dense f64 array in the "PRDS" container: magic, version, dtype tag, rank,
// u32 LE dims, row-major f64 LE payload.
struct RawTensor {
  std::vector<std::uint32_t> dims;
  std::vector<double> values;

  std::size_t element_count() const;
};

std::vector<std::uint8_t> encode_tensor(const RawTensor& t);
RawTensor decode_tensor(std::span<const std::uint8_t> bytes);

void write_tensor_file(const std::filesystem::path& path, const RawTensor& t);
RawTensor read_tensor_file(const std::filesystem::path& path);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace nstego
