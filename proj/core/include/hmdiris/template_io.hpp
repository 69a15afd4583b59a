#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hmdiris/iriscode.hpp"

namespace hmdiris {

inline constexpr std::size_t kTemplateHeaderBytes = 16;

/// Template byte layout:
///   [0,4)   magic "IRC1"
///   [4,8)   encoder id, u32 little-endian (1 = LG, 2 = DCT, 3 = CSBCA)
///   [8,12)  angular_extent, u32 little-endian
///   [12,16) bit length, u32 little-endian
///   code bits, then mask bits, each ceil(bits/8) bytes; flat bit i lives
///   in byte i/8 at bit position i%8 (LSB first).
std::vector<std::uint8_t> serialize_template(const IrisCode& code);
IrisCode deserialize_template(std::span<const std::uint8_t> bytes);

void save_template(const std::filesystem::path& path, const IrisCode& code);
IrisCode load_template(const std::filesystem::path& path);

std::size_t template_size_bytes(const IrisCode& code) noexcept;

}  // namespace hmdiris
