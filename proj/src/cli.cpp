#include "oamc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "oamc/chunk_format.hpp"
#include "oamc/codec.hpp"
#include "oamc/errors.hpp"
#include "oamc/repair.hpp"
#include "oamc/verify.hpp"

namespace oamc {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_insufficient = 2;
constexpr int exit_verify_failed = 3;
constexpr int exit_budget = 4;
constexpr int exit_io = 5;

struct ParamFlags {
  int construction = 1;
  uint32_t s = 0;
  uint32_t r = 0;
  uint32_t m = 0;
  uint32_t rprime = 0;
  std::string field;
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags) {
  cmd->add_option("--construction", flags.construction,
                  "construction id (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  cmd->add_option("--s", flags.s, "group size (construction 1)");
  cmd->add_option("--r", flags.r, "parity count")->required();
  cmd->add_option("--m", flags.m, "group count / length multiplier")
      ->required();
  cmd->add_option("--rprime", flags.rprime, "remainder (construction 2)");
  cmd->add_option("--field", flags.field,
                  "gf7 | gf256 | gf2_16 | prime:P")
      ->required();
}

FieldSpec parse_field(const std::string& name) {
  if (name == "gf7") return FieldSpec::make_prime(7);
  if (name == "gf256") return FieldSpec::gf256();
  if (name == "gf2_16") return FieldSpec::gf65536();
  if (name.rfind("prime:", 0) == 0) {
    return FieldSpec::make_prime(
        static_cast<uint32_t>(std::stoul(name.substr(6))));
  }
  throw ParamError("unknown field name: " + name);
}

CodeParams params_from_flags(const ParamFlags& flags) {
  const FieldSpec spec = parse_field(flags.field);
  if (flags.construction == 1 && flags.s == 0) {
    throw ParamError("construction 1 requires --s");
  }
  return make_params(flags.construction, flags.s, flags.r, flags.m,
                     flags.rprime, spec);
}

std::string hex32(uint32_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(8, '0');
  for (int i = 7; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string field_name(const FieldSpec& spec) {
  if (spec.kind == FieldKind::prime) {
    return "gf(" + std::to_string(spec.prime) + ")";
  }
  return "gf(2^" + std::to_string(spec.width) + ")";
}

std::string lambda_fingerprint(const CodeParams& p) {
  std::vector<uint8_t> bytes;
  for (Symbol v : p.eval_points) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  return hex32(crc32(bytes));
}

fs::path chunk_path(const fs::path& dir, uint32_t node) {
  return dir / ("node_" + std::to_string(node) + ".oamc");
}

std::vector<uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChunkError("cannot open " + path.string());
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ChunkError("cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ChunkError("short write to " + path.string());
}

ChunkHeader read_chunk_header(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChunkError("cannot open " + path.string());
  std::vector<uint8_t> bytes(chunk_header_bytes);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(chunk_header_bytes)) {
    throw ChunkTruncatedError("chunk shorter than a header: " + path.string());
  }
  return parse_header(bytes);
}

// Seek-based payload access that counts every symbol it touches, so the
// repair path can prove it reads nothing beyond the plan.
class PayloadReader {
 public:
  explicit PayloadReader(const fs::path& path)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw ChunkError("cannot open " + path.string());
    std::vector<uint8_t> head(chunk_header_bytes);
    in_.read(reinterpret_cast<char*>(head.data()),
             static_cast<std::streamsize>(head.size()));
    if (in_.gcount() != static_cast<std::streamsize>(chunk_header_bytes)) {
      throw ChunkTruncatedError("chunk shorter than a header: " +
                                path.string());
    }
    header_.emplace(parse_header(head));
    elem_bytes_ = element_bytes(header_->params.field.spec());
    const uint64_t expected =
        chunk_header_bytes + chunk_payload_bytes(*header_);
    if (fs::file_size(path) != expected) {
      throw ChunkTruncatedError("payload size mismatch in " + path.string());
    }
  }

  const ChunkHeader& header() const { return *header_; }
  uint64_t symbols_read() const { return symbols_read_; }

  Symbol read_symbol(uint64_t stripe, uint64_t coord) {
    const uint64_t off =
        chunk_header_bytes +
        (stripe * header_->params.l + coord) * elem_bytes_;
    in_.seekg(static_cast<std::streamoff>(off));
    uint8_t buf[4] = {0, 0, 0, 0};
    in_.read(reinterpret_cast<char*>(buf), elem_bytes_);
    if (in_.gcount() != static_cast<std::streamsize>(elem_bytes_)) {
      throw ChunkTruncatedError("short payload read from " + path_.string());
    }
    ++symbols_read_;
    return read_symbol_bytes(buf, elem_bytes_);
  }

 private:
  fs::path path_;
  std::ifstream in_;
  std::optional<ChunkHeader> header_;
  uint32_t elem_bytes_ = 1;
  uint64_t symbols_read_ = 0;
};

// All well-formed chunks found in a directory, keyed by node index.
std::map<uint32_t, Chunk> load_chunks(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw ChunkError("not a directory: " + dir.string());
  }
  std::map<uint32_t, Chunk> chunks;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("node_", 0) != 0 || entry.path().extension() != ".oamc") {
      continue;
    }
    Chunk chunk = read_chunk(entry.path());
    const uint32_t node = chunk.header.node_index;
    if (chunks.count(node)) {
      throw ChunkError("duplicate chunk for node " + std::to_string(node));
    }
    chunks.emplace(node, std::move(chunk));
  }
  if (chunks.empty()) throw ChunkError("no chunks found in " + dir.string());
  const Chunk& first = chunks.begin()->second;
  const std::vector<uint8_t> params_bytes = first.header.params.serialize();
  for (const auto& [node, chunk] : chunks) {
    if (chunk.header.params.serialize() != params_bytes ||
        chunk.header.stripe_count != first.header.stripe_count ||
        chunk.header.data_byte_length != first.header.data_byte_length) {
      throw ChunkError("chunk headers disagree across the directory");
    }
  }
  return chunks;
}

int cmd_params(const ParamFlags& flags, std::ostream& out) {
  const CodeParams p = params_from_flags(flags);
  json report;
  report["n"] = p.n;
  report["k"] = p.k;
  report["l"] = p.l;
  report["field"] = field_name(p.field.spec());
  report["lambda_fingerprint"] = lambda_fingerprint(p);
  out << report.dump() << "\n";
  return exit_ok;
}

int cmd_encode(const ParamFlags& flags, const std::string& in_file,
               const std::string& out_dir, std::ostream& out) {
  const CodeParams p = params_from_flags(flags);
  const std::vector<uint8_t> bytes = read_file(in_file);
  StripeLayout layout;
  const std::vector<CellMatrix> blocks = stripe_file(p, bytes, &layout);
  const uint32_t eb = layout.elem_bytes;

  const Encoder encoder(p);
  std::vector<std::vector<uint8_t>> payloads(p.n);
  for (auto& payload : payloads) {
    payload.reserve(layout.stripe_count * p.l * eb);
  }
  for (const CellMatrix& block : blocks) {
    const Codeword word = encoder.encode(block);
    for (uint32_t i = 1; i <= p.n; ++i) {
      for (uint64_t a = 0; a < p.l; ++a) {
        append_symbol_bytes(payloads[i - 1], word.cell(i, a), eb);
      }
    }
  }

  fs::create_directories(out_dir);
  for (uint32_t i = 1; i <= p.n; ++i) {
    const ChunkHeader header{.params = p,
                             .node_index = i,
                             .stripe_count = layout.stripe_count,
                             .data_byte_length = bytes.size()};
    write_chunk(chunk_path(out_dir, i), header, payloads[i - 1]);
  }

  json report;
  report["chunks"] = p.n;
  report["stripes"] = layout.stripe_count;
  report["bytes"] = bytes.size();
  out << report.dump() << "\n";
  return exit_ok;
}

int cmd_decode(const std::string& in_dir, const std::string& out_file,
               std::ostream& out, std::ostream& err) {
  const std::map<uint32_t, Chunk> chunks = load_chunks(in_dir);
  const CodeParams& p = chunks.begin()->second.header.params;
  if (chunks.size() < p.k) {
    err << "decode: need at least k=" << p.k << " chunks, found "
        << chunks.size() << "\n";
    return exit_insufficient;
  }
  const ChunkHeader& head = chunks.begin()->second.header;
  const uint32_t eb = element_bytes(p.field.spec());

  std::vector<uint32_t> erased;
  for (uint32_t i = 1; i <= p.n; ++i) {
    if (!chunks.count(i)) erased.push_back(i);
  }
  const Decoder decoder(p, erased);

  std::vector<CellMatrix> blocks;
  blocks.reserve(head.stripe_count);
  for (uint64_t stripe = 0; stripe < head.stripe_count; ++stripe) {
    Codeword known(p.l, p.n);
    for (const auto& [node, chunk] : chunks) {
      const uint8_t* base = chunk.payload.data() + stripe * p.l * eb;
      for (uint64_t a = 0; a < p.l; ++a) {
        known.cell(node, a) = read_symbol_bytes(base + a * eb, eb);
      }
    }
    const Codeword word = decoder.decode(known);
    CellMatrix block(p.l, p.k);
    for (uint32_t j = 1; j <= p.k; ++j) {
      for (uint64_t a = 0; a < p.l; ++a) block.cell(j, a) = word.cell(j, a);
    }
    blocks.push_back(std::move(block));
  }

  const std::vector<uint8_t> bytes =
      unstripe_file(p, blocks, head.data_byte_length);
  write_file(out_file, bytes);

  json report;
  report["bytes"] = bytes.size();
  report["chunks_present"] = chunks.size();
  out << report.dump() << "\n";
  return exit_ok;
}

int cmd_repair(const std::string& in_dir, uint32_t target, bool group_mode,
               const std::vector<uint32_t>& outside_helpers, std::ostream& out,
               std::ostream& err) {
  // Any surviving chunk header describes the code; helpers are opened for
  // payload access below, and nothing else gets its payload read. Broken
  // bystander files are skipped here; helper chunks are validated strictly.
  std::optional<ChunkHeader> head;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("node_", 0) != 0 || entry.path().extension() != ".oamc") {
      continue;
    }
    try {
      ChunkHeader candidate = read_chunk_header(entry.path());
      if (candidate.node_index != target) {
        head.emplace(std::move(candidate));
        break;
      }
    } catch (const ChunkError&) {
      continue;
    }
  }
  if (!head) {
    err << "repair: no surviving chunks in " << in_dir << "\n";
    return exit_insufficient;
  }
  const CodeParams& p = head->params;
  const uint32_t eb = element_bytes(p.field.spec());

  const RepairPlan plan =
      group_mode ? plan_group_repair(p, target, outside_helpers)
                 : plan_full_repair(p, target);

  std::map<uint32_t, PayloadReader> readers;
  for (uint32_t helper : plan.helpers) {
    const fs::path path = chunk_path(in_dir, helper);
    if (!fs::exists(path)) {
      err << "repair: helper chunk missing: " << path.string() << "\n";
      return exit_insufficient;
    }
    readers.emplace(helper, PayloadReader(path));
    if (readers.at(helper).header().params.serialize() != p.serialize()) {
      throw ChunkError("helper chunk params disagree: " + path.string());
    }
  }

  std::vector<uint8_t> payload;
  payload.reserve(head->stripe_count * p.l * eb);
  const uint64_t per_stripe =
      static_cast<uint64_t>(plan.helpers.size()) * plan.coords.size();
  for (uint64_t stripe = 0; stripe < head->stripe_count; ++stripe) {
    ReadTrace trace;
    const HelperReads reads = collect_reads(
        plan,
        [&](uint32_t node, uint64_t coord) {
          return readers.at(node).read_symbol(stripe, coord);
        },
        &trace);
    if (trace.total() != per_stripe) {
      throw RepairError("internal: stripe read count drifted off the plan");
    }
    const std::vector<Symbol> column =
        plan.mode == RepairMode::full ? repair_full(p, plan, reads)
                                      : repair_group(p, plan, reads);
    for (Symbol v : column) append_symbol_bytes(payload, v, eb);
  }

  // Total payload symbols touched per helper must be exactly
  // stripes * l/s; anything else means an off-plan access.
  for (const auto& [helper, reader] : readers) {
    if (reader.symbols_read() != head->stripe_count * plan.coords.size()) {
      throw RepairError("internal: helper " + std::to_string(helper) +
                        " read off-plan payload bytes");
    }
  }

  const ChunkHeader repaired{.params = p,
                             .node_index = target,
                             .stripe_count = head->stripe_count,
                             .data_byte_length = head->data_byte_length};
  write_chunk(chunk_path(in_dir, target), repaired, payload);

  // The per-stripe access pattern equals the plan, so audit the plan once.
  ReadTrace plan_trace;
  for (uint32_t helper : plan.helpers) {
    for (uint64_t a : plan.coords) plan_trace.record(helper, a);
  }
  const AccessReport audit = audit_access(p, plan, plan_trace);
  json report;
  report["node"] = target;
  report["mode"] = plan.mode == RepairMode::full ? "full" : "group";
  report["helpers"] = plan.helpers;
  report["symbols_accessed"] = audit.accessed;
  if (audit.bound_den == 1) {
    report["bound"] = audit.bound_num;
  } else {
    report["bound"] = static_cast<double>(audit.bound_num) /
                      static_cast<double>(audit.bound_den);
  }
  report["optimal"] = audit.optimal;
  out << report.dump() << "\n";
  return exit_ok;
}

int cmd_verify_mds(const ParamFlags& flags, uint64_t budget, std::ostream& out,
                   std::ostream& err) {
  const CodeParams p = params_from_flags(flags);
  try {
    const MdsCertificate cert = check_mds(p, budget);
    out << format_certificate(cert);
    if (!cert.pass) {
      err << "verify-mds: some subsets are not invertible\n";
      return exit_verify_failed;
    }
    return exit_ok;
  } catch (const BudgetError& e) {
    err << "verify-mds: " << e.what() << "\n";
    return exit_budget;
  }
}

int cmd_bench(const ParamFlags& flags, uint64_t stripes, uint64_t seed,
              std::ostream& out, std::ostream& err) {
  const CodeParams p = params_from_flags(flags);
  std::mt19937_64 rng(seed);
  std::vector<CellMatrix> blocks;
  blocks.reserve(stripes);
  for (uint64_t i = 0; i < stripes; ++i) {
    CellMatrix block(p.l, p.k);
    for (Symbol& cell : block.cells) {
      cell = static_cast<Symbol>(rng() % p.field.order());
    }
    blocks.push_back(std::move(block));
  }

  const Encoder encoder(p);
  std::vector<Codeword> words;
  words.reserve(stripes);
  uint32_t encode_crc = 0;
  const auto encode_start = std::chrono::steady_clock::now();
  for (const CellMatrix& block : blocks) {
    words.push_back(encoder.encode(block));
    std::vector<uint8_t> bytes;
    for (uint32_t i = p.k + 1; i <= p.n; ++i) {
      for (uint64_t a = 0; a < p.l; ++a) {
        append_symbol_bytes(bytes, words.back().cell(i, a), 4);
      }
    }
    encode_crc = crc32_update(encode_crc, bytes);
  }
  const auto encode_end = std::chrono::steady_clock::now();

  const RepairPlan plan = plan_full_repair(p, 1);
  uint32_t repair_crc = 0;
  const auto repair_start = std::chrono::steady_clock::now();
  for (const Codeword& word : words) {
    const HelperReads reads = collect_reads(plan, codeword_source(word));
    const std::vector<Symbol> column = repair_full(p, plan, reads);
    std::vector<uint8_t> bytes;
    for (Symbol v : column) append_symbol_bytes(bytes, v, 4);
    repair_crc = crc32_update(repair_crc, bytes);
  }
  const auto repair_end = std::chrono::steady_clock::now();

  const uint64_t encode_symbols = stripes * p.l * p.r;
  const uint64_t repair_symbols = stripes * p.l;
  json report;
  report["stripes"] = stripes;
  report["seed"] = seed;
  report["encode_symbols"] = encode_symbols;
  report["repair_symbols"] = repair_symbols;
  report["encode_crc"] = hex32(encode_crc);
  report["repair_crc"] = hex32(repair_crc);
  out << report.dump() << "\n";

  const auto seconds = [](auto start, auto end) {
    return std::chrono::duration<double>(end - start).count();
  };
  err << "encode: " << encode_symbols / std::max(1e-9, seconds(encode_start,
                                                               encode_end))
      << " symbols/s\n";
  err << "repair: " << repair_symbols / std::max(1e-9, seconds(repair_start,
                                                               repair_end))
      << " symbols/s\n";
  return exit_ok;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  CLI::App app{"optimal-access MDS array code toolkit"};
  app.require_subcommand(1);

  ParamFlags params_flags;
  CLI::App* params_cmd =
      app.add_subcommand("params", "print derived code parameters");
  add_param_flags(params_cmd, params_flags);

  ParamFlags encode_flags;
  std::string encode_in, encode_out_dir;
  CLI::App* encode_cmd = app.add_subcommand("encode", "encode a file into chunks");
  add_param_flags(encode_cmd, encode_flags);
  encode_cmd->add_option("--in", encode_in, "input file")->required();
  encode_cmd->add_option("--out-dir", encode_out_dir, "chunk directory")
      ->required();

  std::string decode_in_dir, decode_out;
  CLI::App* decode_cmd =
      app.add_subcommand("decode", "reconstruct a file from chunks");
  decode_cmd->add_option("--in-dir", decode_in_dir, "chunk directory")
      ->required();
  decode_cmd->add_option("--out", decode_out, "output file")->required();

  std::string repair_in_dir;
  uint32_t repair_node = 0;
  bool repair_group_mode = false;
  std::vector<uint32_t> repair_helpers;
  CLI::App* repair_cmd =
      app.add_subcommand("repair", "rebuild one node chunk from helpers");
  repair_cmd->add_option("--in-dir", repair_in_dir, "chunk directory")
      ->required();
  repair_cmd->add_option("--node", repair_node, "node to rebuild")->required();
  repair_cmd->add_flag("--group", repair_group_mode, "group repair mode");
  repair_cmd
      ->add_option("--helpers", repair_helpers,
                   "helpers outside the group (group mode)")
      ->delimiter(',');

  ParamFlags verify_flags;
  uint64_t verify_budget = default_mds_budget;
  CLI::App* verify_cmd =
      app.add_subcommand("verify-mds", "certify MDS on every r-subset");
  add_param_flags(verify_cmd, verify_flags);
  verify_cmd->add_option("--budget", verify_budget,
                         "element-operation budget");

  ParamFlags bench_flags;
  uint64_t bench_stripes = 1024;
  uint64_t bench_seed = 0;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "deterministic encode/repair benchmark");
  add_param_flags(bench_cmd, bench_flags);
  bench_cmd->add_option("--stripes", bench_stripes, "stripe count");
  bench_cmd->add_option("--seed", bench_seed, "rng seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (params_cmd->parsed()) return cmd_params(params_flags, out);
    if (encode_cmd->parsed()) {
      return cmd_encode(encode_flags, encode_in, encode_out_dir, out);
    }
    if (decode_cmd->parsed()) {
      return cmd_decode(decode_in_dir, decode_out, out, err);
    }
    if (repair_cmd->parsed()) {
      if (repair_group_mode && repair_helpers.empty()) {
        err << "usage error: --group requires --helpers\n";
        return exit_usage;
      }
      if (!repair_group_mode && !repair_helpers.empty()) {
        err << "usage error: --helpers requires --group\n";
        return exit_usage;
      }
      return cmd_repair(repair_in_dir, repair_node, repair_group_mode,
                        repair_helpers, out, err);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify_mds(verify_flags, verify_budget, out, err);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(bench_flags, bench_stripes, bench_seed, out, err);
    }
    err << "usage error: no subcommand\n";
    return exit_usage;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return exit_budget;
  } catch (const ChunkError& e) {
    err << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const StripingError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ParamError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const RepairError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const DecodeError& e) {
    err << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_io;
  }
}

}  // namespace oamc
