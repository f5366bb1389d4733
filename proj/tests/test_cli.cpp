#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oamc/chunk_format.hpp"
#include "oamc/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = oamc::cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("oamc_cli_" + tag + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<uint8_t> random_bytes(size_t count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<uint8_t> bytes(count);
  for (uint8_t& b : bytes) b = static_cast<uint8_t>(rng());
  return bytes;
}

void dump(const fs::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::vector<uint8_t> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

const std::vector<std::string> small_params = {
    "--construction", "1", "--s", "2", "--r", "2",
    "--m",            "2", "--field", "gf256"};

std::vector<std::string> with_params(std::vector<std::string> args) {
  args.insert(args.end(), small_params.begin(), small_params.end());
  return args;
}

}  // namespace

TEST_CASE("cli params reports the derived instance") {
  const CliResult res = run_cli({"params", "--construction", "1", "--s", "3",
                                 "--r", "3", "--m", "2", "--field", "gf7"});
  CHECK(res.code == 0);
  const json report = json::parse(res.out);
  CHECK(report["n"] == 6);
  CHECK(report["k"] == 3);
  CHECK(report["l"] == 9);
  CHECK(report["field"] == "gf(7)");
  CHECK(report["lambda_fingerprint"].is_string());
}

TEST_CASE("cli usage errors exit 1") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"params", "--r", "3", "--m", "2", "--field", "gf7"}).code ==
        1);  // construction 1 without --s
  CHECK(run_cli({"params", "--construction", "1", "--s", "4", "--r", "3",
                 "--m", "2", "--field", "gf7"})
            .code == 1);
  CHECK(run_cli({"nonsense"}).code == 1);
  CHECK(run_cli({"encode", "--in", "x", "--out-dir", "y"}).code == 1);
}

TEST_CASE("cli encode/decode round-trip with erasures") {
  const fs::path dir = fresh_dir("roundtrip");
  const fs::path input = dir / "input.bin";
  const std::vector<uint8_t> bytes = random_bytes(1000, 5);
  dump(input, bytes);
  const fs::path chunks = dir / "chunks";

  const CliResult enc = run_cli(with_params(
      {"encode", "--in", input.string(), "--out-dir", chunks.string()}));
  REQUIRE(enc.code == 0);
  const json enc_report = json::parse(enc.out);
  CHECK(enc_report["chunks"] == 4);
  CHECK(enc_report["bytes"] == 1000);
  for (int i = 1; i <= 4; ++i) {
    CHECK(fs::exists(chunks / ("node_" + std::to_string(i) + ".oamc")));
  }

  // intact decode
  const fs::path out1 = dir / "out1.bin";
  CHECK(run_cli({"decode", "--in-dir", chunks.string(), "--out",
                 out1.string()})
            .code == 0);
  CHECK(slurp(out1) == bytes);

  // r = 2 erasures, mixed data/parity
  fs::remove(chunks / "node_1.oamc");
  fs::remove(chunks / "node_4.oamc");
  const fs::path out2 = dir / "out2.bin";
  CHECK(run_cli({"decode", "--in-dir", chunks.string(), "--out",
                 out2.string()})
            .code == 0);
  CHECK(slurp(out2) == bytes);

  // below k chunks: exit 2
  fs::remove(chunks / "node_2.oamc");
  CHECK(run_cli({"decode", "--in-dir", chunks.string(), "--out",
                 (dir / "out3.bin").string()})
            .code == 2);
  fs::remove_all(dir);
}

TEST_CASE("cli decode flags corruption") {
  const fs::path dir = fresh_dir("corrupt");
  const fs::path input = dir / "input.bin";
  dump(input, random_bytes(64, 6));
  const fs::path chunks = dir / "chunks";
  REQUIRE(run_cli(with_params({"encode", "--in", input.string(), "--out-dir",
                               chunks.string()}))
              .code == 0);
  auto bytes = slurp(chunks / "node_2.oamc");
  bytes[10] ^= 0x55;  // inside the header: CRC failure
  dump(chunks / "node_2.oamc", bytes);
  CHECK(run_cli({"decode", "--in-dir", chunks.string(), "--out",
                 (dir / "out.bin").string()})
            .code == 5);
  CHECK(run_cli({"decode", "--in-dir", (dir / "nowhere").string(), "--out",
                 (dir / "out.bin").string()})
            .code == 5);
  fs::remove_all(dir);
}

TEST_CASE("cli repair rebuilds a chunk reading only the plan") {
  const fs::path dir = fresh_dir("repair");
  const fs::path input = dir / "input.bin";
  dump(input, random_bytes(2048, 7));
  const fs::path chunks = dir / "chunks";
  REQUIRE(run_cli(with_params({"encode", "--in", input.string(), "--out-dir",
                               chunks.string()}))
              .code == 0);
  const std::vector<uint8_t> original = slurp(chunks / "node_3.oamc");
  fs::remove(chunks / "node_3.oamc");

  const CliResult res = run_cli(
      {"repair", "--in-dir", chunks.string(), "--node", "3"});
  REQUIRE(res.code == 0);
  CHECK(slurp(chunks / "node_3.oamc") == original);
  const json report = json::parse(res.out);
  CHECK(report["node"] == 3);
  CHECK(report["mode"] == "full");
  CHECK(report["helpers"] == json::array({1, 2, 4}));
  // n=4, l=4, s=r=2: three helpers * l/s = 6 accesses, bound (n-1)l/(n-k)
  CHECK(report["symbols_accessed"] == 6);
  CHECK(report["bound"] == 6);
  CHECK(report["optimal"] == true);

  // repair with a missing helper chunk
  fs::remove(chunks / "node_1.oamc");
  CHECK(run_cli({"repair", "--in-dir", chunks.string(), "--node", "1"}).code ==
        0);
  CHECK(run_cli({"repair", "--in-dir", chunks.string(), "--node", "9"}).code ==
        1);
  fs::remove(chunks / "node_1.oamc");
  fs::remove(chunks / "node_2.oamc");
  CHECK(run_cli({"repair", "--in-dir", chunks.string(), "--node", "1"}).code ==
        2);
  fs::remove_all(dir);
}

TEST_CASE("cli group repair") {
  const fs::path dir = fresh_dir("group");
  const fs::path input = dir / "input.bin";
  dump(input, random_bytes(3 * 8 * 4, 8));  // a few stripes at k=3, l=8
  const fs::path chunks = dir / "chunks";
  REQUIRE(run_cli({"encode", "--in", input.string(), "--out-dir",
                   chunks.string(), "--construction", "1", "--s", "2", "--r",
                   "3", "--m", "3", "--field", "gf256"})
              .code == 0);
  const std::vector<uint8_t> original = slurp(chunks / "node_1.oamc");
  fs::remove(chunks / "node_1.oamc");

  const CliResult res =
      run_cli({"repair", "--in-dir", chunks.string(), "--node", "1", "--group",
               "--helpers", "3,4,5"});
  REQUIRE(res.code == 0);
  CHECK(slurp(chunks / "node_1.oamc") == original);
  const json report = json::parse(res.out);
  CHECK(report["mode"] == "group");
  CHECK(report["helpers"] == json::array({2, 3, 4, 5}));
  CHECK(report["symbols_accessed"] == 16);  // d*l/s = 4*8/2
  CHECK(report["bound"] == 16);
  CHECK(report["optimal"] == true);

  CHECK(run_cli({"repair", "--in-dir", chunks.string(), "--node", "1",
                 "--group"})
            .code == 1);
  CHECK(run_cli({"repair", "--in-dir", chunks.string(), "--node", "1",
                 "--helpers", "3,4,5"})
            .code == 1);
  CHECK(run_cli({"repair", "--in-dir", chunks.string(), "--node", "1",
                 "--group", "--helpers", "2,3,4"})
            .code == 1);
  fs::remove_all(dir);
}

TEST_CASE("cli handles two-byte symbols end to end") {
  const fs::path dir = fresh_dir("w16");
  const fs::path input = dir / "input.bin";
  const std::vector<uint8_t> bytes = random_bytes(501, 10);  // odd length
  dump(input, bytes);
  const fs::path chunks = dir / "chunks";
  REQUIRE(run_cli({"encode", "--in", input.string(), "--out-dir",
                   chunks.string(), "--construction", "1", "--s", "2", "--r",
                   "2", "--m", "2", "--field", "gf2_16"})
              .code == 0);
  const std::vector<uint8_t> original = slurp(chunks / "node_4.oamc");
  fs::remove(chunks / "node_4.oamc");
  REQUIRE(run_cli({"repair", "--in-dir", chunks.string(), "--node", "4"})
              .code == 0);
  CHECK(slurp(chunks / "node_4.oamc") == original);
  fs::remove(chunks / "node_1.oamc");
  fs::remove(chunks / "node_2.oamc");
  const fs::path out = dir / "out.bin";
  CHECK(run_cli({"decode", "--in-dir", chunks.string(), "--out",
                 out.string()})
            .code == 0);
  CHECK(slurp(out) == bytes);

  // prime fields stay rejected for file workflows
  CHECK(run_cli({"encode", "--in", input.string(), "--out-dir",
                 (dir / "bad").string(), "--construction", "1", "--s", "2",
                 "--r", "2", "--m", "2", "--field", "gf7"})
            .code == 1);
  fs::remove_all(dir);
}

TEST_CASE("cli construction-2 workflows") {
  // r=2, m=2, r'=1: n=5, k=3, l=8 over GF(2^8)
  const fs::path dir = fresh_dir("c2");
  const fs::path input = dir / "input.bin";
  const std::vector<uint8_t> bytes = random_bytes(777, 9);
  dump(input, bytes);
  const fs::path chunks = dir / "chunks";
  REQUIRE(run_cli({"encode", "--in", input.string(), "--out-dir",
                   chunks.string(), "--construction", "2", "--r", "2", "--m",
                   "2", "--rprime", "1", "--field", "gf256"})
              .code == 0);
  CHECK(fs::exists(chunks / "node_5.oamc"));

  const std::vector<uint8_t> original = slurp(chunks / "node_5.oamc");
  fs::remove(chunks / "node_5.oamc");
  const CliResult repair = run_cli(
      {"repair", "--in-dir", chunks.string(), "--node", "5"});
  REQUIRE(repair.code == 0);
  CHECK(slurp(chunks / "node_5.oamc") == original);
  const json report = json::parse(repair.out);
  CHECK(report["symbols_accessed"] == 16);  // 4 helpers * l/r = 4
  CHECK(report["optimal"] == true);

  fs::remove(chunks / "node_2.oamc");
  fs::remove(chunks / "node_4.oamc");
  const fs::path out = dir / "out.bin";
  CHECK(run_cli({"decode", "--in-dir", chunks.string(), "--out",
                 out.string()})
            .code == 0);
  CHECK(slurp(out) == bytes);
  fs::remove_all(dir);
}

TEST_CASE("cli verify-mds certificate and exit codes") {
  const CliResult pass = run_cli({"verify-mds", "--construction", "1", "--s",
                                  "3", "--r", "3", "--m", "2", "--field",
                                  "gf7"});
  CHECK(pass.code == 0);
  CHECK(pass.out.find("params=") == 0);
  size_t lines = 0;
  for (char c : pass.out) lines += c == '\n';
  CHECK(lines == 21);  // header + C(6,3) subsets
  CHECK(pass.out.find("invertible=false") == std::string::npos);

  const CliResult budget = run_cli({"verify-mds", "--construction", "1", "--s",
                                    "3", "--r", "3", "--m", "2", "--field",
                                    "gf7", "--budget", "10"});
  CHECK(budget.code == 4);

  const CliResult c2 = run_cli({"verify-mds", "--construction", "2", "--r",
                                "3", "--m", "1", "--rprime", "2", "--field",
                                "gf7"});
  CHECK(c2.code == 0);
}

TEST_CASE("cli bench is deterministic") {
  const std::vector<std::string> args = {
      "bench", "--construction", "1",    "--s",       "2",  "--r",
      "2",     "--m",            "2",    "--field",   "gf7", "--stripes",
      "16",    "--seed",         "1234"};
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const json report = json::parse(a.out);
  CHECK(report["stripes"] == 16);
  CHECK(report["encode_symbols"] == 16 * 4 * 2);
  CHECK(report["encode_crc"].is_string());
}
