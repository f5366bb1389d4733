#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "oamc/code_params.hpp"
#include "oamc/codec.hpp"

namespace oamc {

inline constexpr uint8_t chunk_version = 1;
inline constexpr size_t chunk_header_bytes = 41;

// On-disk node chunk header, little-endian throughout:
//   magic "OAMC" (4) | version u8 | code params (14) | node_index u16 |
//   stripe_count u64 | data_byte_length u64 | header crc32 u32
// data_byte_length is the original striped payload in bytes (shared by all
// chunks of one encode); the chunk's own payload is always
// stripe_count * l * element_bytes and is validated against the file size.
struct ChunkHeader {
  CodeParams params;
  uint32_t node_index = 0;
  uint64_t stripe_count = 0;
  uint64_t data_byte_length = 0;
};

// Bytes per stored symbol for file workflows: 1 for GF(2^8), 2 for
// GF(2^16) (packed little-endian). Other fields are not byte-mappable and
// throw StripingError.
uint32_t element_bytes(const FieldSpec& spec);

uint64_t chunk_payload_bytes(const ChunkHeader& header);

std::vector<uint8_t> serialize_header(const ChunkHeader& header);
ChunkHeader parse_header(std::span<const uint8_t> bytes);

// Atomic write: temp file in the same directory, then rename.
void write_chunk(const std::filesystem::path& path, const ChunkHeader& header,
                 std::span<const uint8_t> payload);

struct Chunk {
  ChunkHeader header;
  std::vector<uint8_t> payload;
};

// Validates magic, version, header CRC and payload length, each reported
// through its own error type.
Chunk read_chunk(const std::filesystem::path& path);

uint32_t crc32(std::span<const uint8_t> bytes);
uint32_t crc32_update(uint32_t state, std::span<const uint8_t> bytes);

struct StripeLayout {
  uint64_t data_bytes = 0;
  uint64_t stripe_count = 0;
  uint32_t elem_bytes = 1;
  uint64_t stripe_data_bytes = 0;  // k * l * elem_bytes

  bool operator==(const StripeLayout&) const = default;
};

StripeLayout plan_stripes(const CodeParams& p, uint64_t data_bytes);

// Packs bytes row-major into l x k data blocks (coordinate a, then node),
// zero-filling the final stripe. unstripe_file inverts it exactly for any
// length, including zero.
std::vector<CellMatrix> stripe_file(const CodeParams& p,
                                    std::span<const uint8_t> bytes,
                                    StripeLayout* layout_out = nullptr);
std::vector<uint8_t> unstripe_file(const CodeParams& p,
                                   const std::vector<CellMatrix>& blocks,
                                   uint64_t data_bytes);

void append_symbol_bytes(std::vector<uint8_t>& out, Symbol v,
                         uint32_t elem_bytes);
Symbol read_symbol_bytes(const uint8_t* p, uint32_t elem_bytes);

}  // namespace oamc
