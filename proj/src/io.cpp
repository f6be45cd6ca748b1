// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "nstego/error.hpp"

namespace nstego {
namespace {

constexpr char kMagic[4] = {'P', 'R', 'D', 'S'};
constexpr std::size_t kHeaderSize = 7;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(const std::uint8_t* in) {
  return static_cast<std::uint32_t>(in[0]) | (static_cast<std::uint32_t>(in[1]) << 8) |
         (static_cast<std::uint32_t>(in[2]) << 16) | (static_cast<std::uint32_t>(in[3]) << 24);
}

}  // namespace

std::size_t RawTensor::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<std::uint8_t> encode_tensor(const RawTensor& t) {
  if (t.dims.size() > 255) throw FormatError("tensor rank exceeds 255");
  if (t.element_count() != t.values.size()) {
    throw ShapeError("tensor dims describe " + std::to_string(t.element_count()) +
                     " values, payload has " + std::to_string(t.values.size()));
  }
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(kTensorFormatVersion);
  out.push_back(kDtypeF64);
  out.push_back(static_cast<std::uint8_t>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  out.reserve(out.size() + 8 * t.values.size());
  for (double v : t.values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
  return out;
}

RawTensor decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("not a PRDS tensor (bad magic)");
  }
  if (bytes[4] != kTensorFormatVersion) {
    throw FormatError("unsupported tensor format version " + std::to_string(bytes[4]));
  }
  if (bytes[5] != kDtypeF64) throw FormatError("unsupported dtype tag " + std::to_string(bytes[5]));
  const std::size_t rank = bytes[6];
  const std::size_t dims_end = kHeaderSize + 4 * rank;
  if (bytes.size() < dims_end) throw FormatError("truncated tensor header");
  RawTensor t;
  for (std::size_t k = 0; k < rank; ++k) t.dims.push_back(get_u32(bytes.data() + kHeaderSize + 4 * k));
  const std::size_t count = t.element_count();
  if (bytes.size() != dims_end + 8 * count) {
    throw FormatError("tensor payload is " + std::to_string(bytes.size() - dims_end) +
                      " bytes, header implies " + std::to_string(8 * count));
  }
  t.values.resize(count);
  const std::uint8_t* p = bytes.data() + dims_end;
  for (std::size_t i = 0; i < count; ++i, p += 8) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
    t.values[i] = std::bit_cast<double>(bits);
  }
  return t;
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

void write_tensor_file(const std::filesystem::path& path, const RawTensor& t) {
  write_binary_file(path, encode_tensor(t));
}

RawTensor read_tensor_file(const std::filesystem::path& path) {
  return decode_tensor(read_binary_file(path));
}

}  // namespace nstego
