#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "padic_cli.hpp"
#include "padic/oracles.hpp"

namespace fs = std::filesystem;
using namespace padic;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("padic_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(std::move(args), out_, err_);
  }

  void put(const std::string& name, const std::vector<std::uint8_t>& data) { cli::write_file(path(name), data); }
  std::vector<std::uint8_t> get(const std::string& name) { return cli::read_file(path(name)); }

  void expect_roundtrip(const std::vector<std::uint8_t>& data, std::vector<std::string> enc_opts) {
    put("in.bin", data);
    std::vector<std::string> enc = {"encode"};
    enc.insert(enc.end(), enc_opts.begin(), enc_opts.end());
    enc.push_back(path("in.bin"));
    enc.push_back(path("out.pad"));
    ASSERT_EQ(run(enc), 0) << err_.str();
    ASSERT_EQ(run({"decode", path("out.pad"), path("back.bin")}), 0) << err_.str();
    ASSERT_EQ(get("back.bin"), data);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

std::vector<std::uint8_t> text_bytes(std::size_t size, std::uint64_t seed) {
  static const char* words[] = {"the", "of", "and", "to", "in", "a", "is", "that", "for", "it", "as", "with",
                                "was", "on", "be", "by", "this", "are", "or", "from", "interval", "point",
                                "digit", "coding", "grid", "path", "symbol", "model", "number", "tree"};
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> out;
  while (out.size() < size) {
    const char* w = words[rng() % 30];
    out.insert(out.end(), w, w + std::strlen(w));
    out.push_back(rng() % 12 == 0 ? '\n' : ' ');
  }
  out.resize(size);
  return out;
}

}  // namespace

TEST_F(CliTest, RoundtripOptionMatrix) {
  auto data = text_bytes(20000, 1);
  for (std::string model : {"adaptive", "static", "huffman"})
    for (std::vector<std::string> extra : {std::vector<std::string>{}, {"--no-ar"}, {"--flush", "left"}, {"-N", "16"}}) {
      std::vector<std::string> opts = {"--model", model};
      opts.insert(opts.end(), extra.begin(), extra.end());
      expect_roundtrip(data, opts);
    }
}

TEST_F(CliTest, RoundtripOtherPrimes) {
  auto data = text_bytes(5000, 2);
  expect_roundtrip(data, {"-P", "3", "-N", "20"});
  expect_roundtrip(data, {"-P", "5", "-N", "12", "--no-ar"});
  expect_roundtrip(data, {"-P", "3", "-N", "20", "--model", "static", "--flush", "left"});
}

TEST_F(CliTest, RoundtripBinaryFuzz) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    std::vector<std::uint8_t> data(rng() % 3000);
    const int mode = i % 4;
    for (auto& b : data) b = mode == 0 ? rng() : mode == 1 ? rng() % 3 : mode == 2 ? 0xFF : (rng() % 20 ? 0 : rng());
    expect_roundtrip(data, {"--model", i % 3 == 0 ? "static" : "adaptive"});
    if (mode == 2) expect_roundtrip(data, {"--model", "unary"});
  }
}

TEST_F(CliTest, EmptyAndRepeatedFiles) {
  for (std::string model : {"adaptive", "static", "huffman", "unary"}) {
    expect_roundtrip({}, {"--model", model});
    expect_roundtrip(std::vector<std::uint8_t>(777, 'z'), {"--model", model});
  }
}

TEST_F(CliTest, UnaryGolombRows) {
  const std::vector<std::string> rows = {"1111",  "1110",  "1101",  "1100",  "1011",  "1010",  "1001",  "1000",
                                         "01111", "01110", "01101", "01100", "01011", "01010", "01001", "01000"};
  for (std::size_t w = 0; w < rows.size(); ++w) {
    put("u.bin", std::vector<std::uint8_t>(w, '*'));
    ASSERT_EQ(run({"encode", "--model", "unary", "-N", "4", "--flush", "left", path("u.bin"), path("u.pad")}), 0)
        << err_.str();
    auto bytes = get("u.pad");
    Container c = read_container(bytes);
    std::string digits;
    for (std::uint64_t i = 0; i < c.reader.declared_count(); ++i) digits += char('0' + c.reader.get_digit());
    EXPECT_EQ(digits, rows[w]) << "W=" << w;
  }
}

TEST_F(CliTest, DecodeHonorsHeaderFlags) {
  auto data = text_bytes(8000, 4);
  put("in.bin", data);
  ASSERT_EQ(run({"encode", "--no-ar", "--flush", "left", "-N", "20", path("in.bin"), path("o.pad")}), 0);
  Container c = read_container(get("o.pad"));
  EXPECT_FALSE(c.header.ar);
  EXPECT_EQ(c.header.flush, FlushMode::left);
  EXPECT_EQ(c.header.n, 20u);
  ASSERT_EQ(run({"decode", path("o.pad"), path("b.bin")}), 0);
  EXPECT_EQ(get("b.bin"), data);
}

TEST_F(CliTest, StatsMatchWrittenBytes) {
  put("in.bin", text_bytes(3000, 5));
  ASSERT_EQ(run({"encode", "--model", "static", "-N", "24", "--flush", "left", path("in.bin"), path("o.pad")}), 0);
  auto bytes = get("o.pad");
  ASSERT_EQ(run({"stats", path("o.pad")}), 0);
  std::map<std::string, std::string> fields;
  std::istringstream in(out_.str());
  std::string line;
  while (std::getline(in, line)) {
    auto colon = line.find(':');
    std::string value = line.substr(colon + 1);
    value.erase(0, value.find_first_not_of(' '));
    fields[line.substr(0, colon)] = value;
  }
  EXPECT_EQ(fields["P"], std::to_string(bytes[5]));
  EXPECT_EQ(fields["N"], std::to_string(bytes[6]));
  EXPECT_EQ(fields["ar"], (bytes[7] & 1) ? "on" : "off");
  EXPECT_EQ(fields["flush"], (bytes[7] & 2) ? "left" : "min");
  EXPECT_EQ(fields["model"], "static");
  EXPECT_EQ(bytes[8], 0);
  EXPECT_EQ(fields["alphabet_size"], std::to_string(bytes[9] | (bytes[10] << 8)));
  std::uint64_t total = 0, count = 0;
  for (int i = 0; i < 257; ++i) {
    std::uint32_t f = 0;
    for (int k = 0; k < 4; ++k) f |= std::uint32_t{bytes[11 + 4 * i + k]} << (8 * k);
    total += f;
  }
  for (int k = 0; k < 8; ++k) count |= std::uint64_t{bytes[11 + 4 * 257 + k]} << (8 * k);
  EXPECT_EQ(fields["model_total"], std::to_string(total));
  EXPECT_EQ(fields["digit_count"], std::to_string(count));
  EXPECT_EQ(fields["payload_bytes"], std::to_string((count + 7) / 8));
  EXPECT_EQ(fields["file_bytes"], std::to_string(bytes.size()));
  EXPECT_EQ(bytes.size(), 11 + 4 * 257 + 8 + (count + 7) / 8);
}

TEST_F(CliTest, FreqFile) {
  std::string counts;
  for (int i = 0; i < 257; ++i) counts += std::to_string(i % 7) + (i % 16 == 15 ? "\n" : " ");
  put("f.txt", std::vector<std::uint8_t>(counts.begin(), counts.end()));
  auto data = text_bytes(4000, 6);
  expect_roundtrip(data, {"--model", "static", "--freq-file", path("f.txt")});
  expect_roundtrip(data, {"--model", "huffman", "--freq-file", path("f.txt")});

  put("short.txt", {'1', ' ', '2'});
  put("in.bin", data);
  EXPECT_EQ(run({"encode", "--model", "static", "--freq-file", path("short.txt"), path("in.bin"), path("o.pad")}), 1);
  EXPECT_NE(err_.str().find("257"), std::string::npos);
}

TEST_F(CliTest, ErrorExitCodes) {
  put("in.bin", text_bytes(1000, 7));
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"encode", path("in.bin")}), 1);
  EXPECT_EQ(run({"encode", "-P", "4", path("in.bin"), path("o.pad")}), 1);
  EXPECT_EQ(run({"encode", "-N", "3", path("in.bin"), path("o.pad")}), 1);
  EXPECT_EQ(run({"encode", "-N", "32", path("in.bin"), path("o.pad")}), 1);
  EXPECT_EQ(run({"encode", "-N", "9", path("in.bin"), path("o.pad")}), 1);  // 2*257 > 2^7
  EXPECT_EQ(run({"encode", "--model", "bogus", path("in.bin"), path("o.pad")}), 1);
  EXPECT_EQ(run({"encode", "--model", "huffman", "-P", "3", "-N", "10", path("in.bin"), path("o.pad")}), 1);
  EXPECT_EQ(run({"encode", "--model", "unary", path("in.bin"), path("o.pad")}), 1);
  EXPECT_EQ(run({"encode", path("missing.bin"), path("o.pad")}), 2);
  EXPECT_EQ(run({"encode", path("in.bin"), path("no/such/dir/o.pad")}), 2);
  EXPECT_EQ(run({"decode", path("missing.pad"), path("x")}), 2);
  EXPECT_EQ(run({"decode", path("in.bin"), path("x")}), 3);
  EXPECT_NE(err_.str().find("bad magic"), std::string::npos);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(CliTest, TruncatedContainer) {
  put("in.bin", text_bytes(2000, 8));
  ASSERT_EQ(run({"encode", path("in.bin"), path("o.pad")}), 0);
  auto bytes = get("o.pad");
  bytes.resize(bytes.size() - 10);
  put("t.pad", bytes);
  EXPECT_EQ(run({"decode", path("t.pad"), path("x")}), 3);
  EXPECT_NE(err_.str().find("truncated payload"), std::string::npos);
}

TEST_F(CliTest, CorruptedPayloadFailsLoudlyOrDiffers) {
  auto data = text_bytes(3000, 9);
  put("in.bin", data);
  ASSERT_EQ(run({"encode", path("in.bin"), path("o.pad")}), 0);
  auto good = get("o.pad");
  std::mt19937_64 rng(10);
  for (int i = 0; i < 30; ++i) {
    auto bad = good;
    bad[11 + 8 + rng() % (bad.size() - 19)] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    put("c.pad", bad);
    const int code = run({"decode", path("c.pad"), path("x")});
    if (code == 0)
      EXPECT_NE(get("x"), data);
    else
      EXPECT_EQ(code, 3);
  }
}

TEST_F(CliTest, BenchEmptyDirectory) {
  fs::create_directories(path("corpus"));
  ASSERT_EQ(run({"bench", path("corpus")}), 0);
  EXPECT_EQ(out_.str(), "file,original_bytes,compressed_bytes,bits_per_byte,seconds,status\nTOTAL,0,0,0.0000,0.000,ok\n");
}

TEST_F(CliTest, BenchRowsSortedAndFailuresMarked) {
  fs::create_directories(path("corpus"));
  cli::write_file(path("corpus/b.txt"), std::vector<std::uint8_t>(100, 'q'));
  cli::write_file(path("corpus/a.txt"), std::vector<std::uint8_t>(50, 'q'));
  cli::write_file(path("corpus/c.txt"), text_bytes(100, 1));
  ASSERT_EQ(run({"bench", "--model", "unary", path("corpus")}), 0);
  std::istringstream in(out_.str());
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[1].rfind("a.txt,50,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("b.txt,100,", 0), 0u);
  EXPECT_EQ(lines[3], "c.txt,,,,,failed");
  EXPECT_EQ(lines[4].rfind("TOTAL,150,", 0), 0u);
}

TEST_F(CliTest, IidFileNearEntropy) {
  // 16-symbol skewed source spread over the byte range
  std::vector<std::uint64_t> w = {40, 20, 10, 10, 5, 5, 3, 2, 1, 1, 1, 1, 1, 1, 1, 1};
  std::mt19937_64 rng(11);
  std::discrete_distribution<int> dist(w.begin(), w.end());
  std::vector<std::uint8_t> data(200000);
  for (auto& b : data) b = static_cast<std::uint8_t>(16 * dist(rng) + 3);
  std::vector<std::uint64_t> empirical(16, 0);
  for (auto b : data) ++empirical[(b - 3) / 16];
  const double h = oracle::entropy(empirical);

  fs::create_directories(path("corpus"));
  cli::write_file(path("corpus/iid.bin"), data);
  ASSERT_EQ(run({"bench", path("corpus")}), 0);
  std::istringstream in(out_.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  std::vector<std::string> cols;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
  ASSERT_EQ(cols.size(), 6u);
  const double bpb = std::stod(cols[3]);
  EXPECT_LE(std::abs(bpb - h), 0.02 * h) << "bpb " << bpb << " entropy " << h;
}
