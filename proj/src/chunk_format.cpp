#include "oamc/chunk_format.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "oamc/errors.hpp"

namespace oamc {

namespace {

constexpr std::array<uint8_t, 4> magic = {'O', 'A', 'M', 'C'};

const std::array<uint32_t, 256>& crc_table() {
  static const std::array<uint32_t, 256> table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int bit = 0; bit < 8; ++bit) {
        c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      }
      t[i] = c;
    }
    return t;
  }();
  return table;
}

void write_u64le(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t read_u64le(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

uint32_t crc32_update(uint32_t state, std::span<const uint8_t> bytes) {
  uint32_t c = state ^ 0xffffffffu;
  for (uint8_t b : bytes) {
    c = crc_table()[(c ^ b) & 0xff] ^ (c >> 8);
  }
  return c ^ 0xffffffffu;
}

uint32_t crc32(std::span<const uint8_t> bytes) {
  return crc32_update(0, bytes);
}

uint32_t element_bytes(const FieldSpec& spec) {
  if (spec.kind == FieldKind::binary && spec.width == 8) return 1;
  if (spec.kind == FieldKind::binary && spec.width == 16) return 2;
  throw StripingError("file workflows need a byte-mappable field "
                      "(GF(2^8) or GF(2^16))");
}

uint64_t chunk_payload_bytes(const ChunkHeader& header) {
  return header.stripe_count * header.params.l *
         element_bytes(header.params.field.spec());
}

std::vector<uint8_t> serialize_header(const ChunkHeader& header) {
  std::vector<uint8_t> out(magic.begin(), magic.end());
  out.push_back(chunk_version);
  const std::vector<uint8_t> params = header.params.serialize();
  out.insert(out.end(), params.begin(), params.end());
  out.push_back(static_cast<uint8_t>(header.node_index));
  out.push_back(static_cast<uint8_t>(header.node_index >> 8));
  write_u64le(out, header.stripe_count);
  write_u64le(out, header.data_byte_length);
  const uint32_t crc = crc32(out);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(crc >> (8 * i)));
  if (out.size() != chunk_header_bytes) {
    throw ChunkError("internal: header layout drifted");
  }
  return out;
}

ChunkHeader parse_header(std::span<const uint8_t> bytes) {
  if (bytes.size() < chunk_header_bytes) {
    throw ChunkTruncatedError("chunk shorter than a header");
  }
  if (!std::equal(magic.begin(), magic.end(), bytes.begin())) {
    throw ChunkMagicError("bad chunk magic");
  }
  if (bytes[4] != chunk_version) {
    throw ChunkVersionError("unsupported chunk version " +
                            std::to_string(bytes[4]));
  }
  uint32_t stored_crc = 0;
  for (int i = 0; i < 4; ++i) {
    stored_crc |= static_cast<uint32_t>(bytes[37 + i]) << (8 * i);
  }
  if (crc32(bytes.subspan(0, 37)) != stored_crc) {
    throw ChunkCrcError("header crc mismatch");
  }
  size_t off = 5;
  CodeParams params = CodeParams::deserialize(bytes.data(), 37, off);
  ChunkHeader header{.params = std::move(params)};
  header.node_index = bytes[19] | (uint32_t{bytes[20]} << 8);
  header.stripe_count = read_u64le(bytes.data() + 21);
  header.data_byte_length = read_u64le(bytes.data() + 29);
  if (header.node_index < 1 || header.node_index > header.params.n) {
    throw ChunkError("node index out of range");
  }
  return header;
}

void write_chunk(const std::filesystem::path& path, const ChunkHeader& header,
                 std::span<const uint8_t> payload) {
  if (payload.size() != chunk_payload_bytes(header)) {
    throw ChunkError("payload length does not match the header");
  }
  const std::vector<uint8_t> head = serialize_header(header);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ChunkError("cannot open " + tmp.string());
    out.write(reinterpret_cast<const char*>(head.data()),
              static_cast<std::streamsize>(head.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) throw ChunkError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Chunk read_chunk(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChunkError("cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  ChunkHeader header = parse_header(bytes);
  const uint64_t expected = chunk_payload_bytes(header);
  if (bytes.size() - chunk_header_bytes < expected) {
    throw ChunkTruncatedError("payload truncated: expected " +
                              std::to_string(expected) + " bytes, found " +
                              std::to_string(bytes.size() -
                                             chunk_header_bytes));
  }
  if (bytes.size() - chunk_header_bytes > expected) {
    throw ChunkError("payload longer than the header describes");
  }
  Chunk chunk{.header = std::move(header),
              .payload = {bytes.begin() + chunk_header_bytes, bytes.end()}};
  return chunk;
}

StripeLayout plan_stripes(const CodeParams& p, uint64_t data_bytes) {
  StripeLayout layout;
  layout.data_bytes = data_bytes;
  layout.elem_bytes = element_bytes(p.field.spec());
  layout.stripe_data_bytes =
      static_cast<uint64_t>(p.k) * p.l * layout.elem_bytes;
  layout.stripe_count =
      data_bytes == 0
          ? 0
          : (data_bytes + layout.stripe_data_bytes - 1) /
                layout.stripe_data_bytes;
  return layout;
}

std::vector<CellMatrix> stripe_file(const CodeParams& p,
                                    std::span<const uint8_t> bytes,
                                    StripeLayout* layout_out) {
  const StripeLayout layout = plan_stripes(p, bytes.size());
  if (layout_out) *layout_out = layout;
  std::vector<CellMatrix> blocks;
  blocks.reserve(layout.stripe_count);
  size_t off = 0;
  for (uint64_t s = 0; s < layout.stripe_count; ++s) {
    CellMatrix block(p.l, p.k);
    for (uint64_t a = 0; a < p.l && off < bytes.size(); ++a) {
      for (uint32_t j = 1; j <= p.k && off < bytes.size(); ++j) {
        Symbol v = 0;
        for (uint32_t b = 0; b < layout.elem_bytes && off < bytes.size(); ++b) {
          v |= static_cast<Symbol>(bytes[off++]) << (8 * b);
        }
        block.cell(j, a) = v;
      }
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<uint8_t> unstripe_file(const CodeParams& p,
                                   const std::vector<CellMatrix>& blocks,
                                   uint64_t data_bytes) {
  const StripeLayout layout = plan_stripes(p, data_bytes);
  if (blocks.size() != layout.stripe_count) {
    throw StripingError("stripe count does not match the data length");
  }
  std::vector<uint8_t> bytes;
  bytes.reserve(data_bytes);
  for (const CellMatrix& block : blocks) {
    for (uint64_t a = 0; a < p.l && bytes.size() < data_bytes; ++a) {
      for (uint32_t j = 1; j <= p.k && bytes.size() < data_bytes; ++j) {
        const Symbol v = block.cell(j, a);
        for (uint32_t b = 0;
             b < layout.elem_bytes && bytes.size() < data_bytes; ++b) {
          bytes.push_back(static_cast<uint8_t>(v >> (8 * b)));
        }
      }
    }
  }
  return bytes;
}

void append_symbol_bytes(std::vector<uint8_t>& out, Symbol v,
                         uint32_t elem_bytes) {
  for (uint32_t b = 0; b < elem_bytes; ++b) {
    out.push_back(static_cast<uint8_t>(v >> (8 * b)));
  }
}

Symbol read_symbol_bytes(const uint8_t* p, uint32_t elem_bytes) {
  Symbol v = 0;
  for (uint32_t b = 0; b < elem_bytes; ++b) {
    v |= static_cast<Symbol>(p[b]) << (8 * b);
  }
  return v;
}

}  // namespace oamc
