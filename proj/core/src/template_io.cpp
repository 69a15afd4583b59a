#include "hmdiris/template_io.hpp"

#include <fstream>
#include <iterator>

#include "hmdiris/error.hpp"

namespace hmdiris {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[at + b]) << (8 * b);
  return v;
}

}  // namespace

std::size_t template_size_bytes(const IrisCode& code) noexcept {
  return kTemplateHeaderBytes + 2 * ((code.bit_count() + 7) / 8);
}

std::vector<std::uint8_t> serialize_template(const IrisCode& code) {
  std::vector<std::uint8_t> out;
  out.reserve(template_size_bytes(code));
  for (char c : {'I', 'R', 'C', '1'}) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, static_cast<std::uint32_t>(code.encoder()));
  put_u32(out, static_cast<std::uint32_t>(code.angular_extent()));
  put_u32(out, static_cast<std::uint32_t>(code.bit_count()));

  const std::size_t bytes = (code.bit_count() + 7) / 8;
  for (bool mask : {false, true}) {
    const std::size_t base = out.size();
    out.resize(base + bytes, 0);
    for (std::size_t i = 0; i < code.bit_count(); ++i) {
      if (mask ? code.mask_bit(i) : code.code_bit(i)) {
        out[base + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
      }
    }
  }
  return out;
}

IrisCode deserialize_template(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kTemplateHeaderBytes || bytes[0] != 'I' || bytes[1] != 'R' ||
      bytes[2] != 'C' || bytes[3] != '1') {
    throw Error(ErrorCode::TemplateFormat, "missing IRC1 header");
  }
  const std::uint32_t enc = get_u32(bytes, 4);
  const std::uint32_t extent = get_u32(bytes, 8);
  const std::uint32_t bits = get_u32(bytes, 12);
  if (enc < 1 || enc > 3) throw Error(ErrorCode::TemplateFormat, "unknown encoder id");
  if (extent == 0 || bits == 0 || bits % extent != 0) {
    throw Error(ErrorCode::TemplateFormat, "bit length is not a positive multiple of extent");
  }
  const std::size_t nbytes = (bits + 7) / 8;
  if (bytes.size() != kTemplateHeaderBytes + 2 * nbytes) {
    throw Error(ErrorCode::TemplateFormat, "template size does not match header");
  }
  IrisCode code(static_cast<Encoder>(enc), bits / extent, extent);
  const std::size_t code_at = kTemplateHeaderBytes;
  const std::size_t mask_at = code_at + nbytes;
  for (std::size_t i = 0; i < bits; ++i) {
    code.set_code_bit(i, (bytes[code_at + i / 8] >> (i % 8)) & 1u);
    code.set_mask_bit(i, (bytes[mask_at + i / 8] >> (i % 8)) & 1u);
  }
  return code;
}

void save_template(const std::filesystem::path& path, const IrisCode& code) {
  const auto bytes = serialize_template(code);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

IrisCode load_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileMissing, path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_template(bytes);
}

}  // namespace hmdiris
