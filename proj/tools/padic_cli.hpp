// Command-line front end: byte files in, PADC containers out.
//
// Byte alphabet: symbol = byte value, EOM = 256. The unary model only takes
// files made of one repeated byte; the byte goes in the container.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "padic/padic.hpp"

namespace padic::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kFormat = 3 };

inline constexpr std::size_t kByteAlphabet = 256;
// decode refuses to produce more than this; a corrupt tail can otherwise run on
inline constexpr std::uint64_t kMaxDecodedBytes = std::uint64_t{1} << 32;

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// model misconfiguration; reported as a usage error
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  ModelKind model = ModelKind::adaptive;
  std::uint32_t p = 2;
  std::uint32_t n = 31;
  bool ar = true;
  FlushMode flush = FlushMode::min;
  std::string freq_file;
};

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw io_error("read failed: " + path.string());
  return data;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw io_error("write failed: " + path.string());
}

inline void validate(const Options& o) {
  if (!is_prime(o.p) || o.p > 255) throw config_error("P must be a prime below 256");
  if (o.p == 2 && (o.n < 4 || o.n > 31)) throw config_error("N must be in [4, 31] for P = 2");
  if (o.n < 4) throw config_error("N must be at least 4");
  try {
    GridParams g(o.p, o.n);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
}

// 257 counts (EOM last); zeros become 1 since every byte must stay codable.
inline std::vector<std::uint64_t> read_freq_file(const std::string& path) {
  auto bytes = read_file(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  std::vector<std::uint64_t> counts;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      counts.push_back(std::stoull(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw config_error("freq file: not a count: " + tok);
    }
  }
  if (counts.size() != kByteAlphabet + 1)
    throw config_error("freq file must hold 257 counts, got " + std::to_string(counts.size()));
  for (auto& c : counts) c = std::max<std::uint64_t>(c, 1);
  return counts;
}

inline std::vector<std::uint64_t> histogram(std::span<const std::uint8_t> data) {
  std::vector<std::uint64_t> counts(kByteAlphabet + 1, 1);
  for (auto b : data) ++counts[b];
  return counts;
}

// Scales counts (all >= 1) so their sum is at most cap, keeping every count >= 1.
inline std::vector<std::uint64_t> fit_counts(std::vector<std::uint64_t> counts, std::uint64_t cap) {
  const std::uint64_t n = counts.size();
  if (n > cap) throw config_error("grid too small for the byte alphabet: increase N");
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total <= cap) return counts;
  for (auto& c : counts) c = 1 + static_cast<std::uint64_t>(wide_t{c - 1} * (cap - n) / (total - n));
  return counts;
}

inline Model model_from_header(const ContainerHeader& h) {
  GridParams g(h.p, h.n);
  switch (h.model) {
    case ModelKind::static_freq:
      return StaticModel(std::vector<std::uint64_t>(h.frequencies.begin(), h.frequencies.end()), g);
    case ModelKind::adaptive:
      return AdaptiveModel(h.alphabet_size, g);
    case ModelKind::huffman:
      return HuffmanModel(canonical_codebook(h.code_lengths, h.p), g);
    case ModelKind::unary:
      return UnaryModel(g);
  }
  throw format_error("unknown model id");
}

inline ContainerHeader make_header(const Options& o, std::span<const std::uint8_t> data) {
  validate(o);
  ContainerHeader h;
  h.p = o.p;
  h.n = o.n;
  h.ar = o.ar;
  h.flush = o.flush;
  h.model = o.model;
  h.alphabet_size = kByteAlphabet;
  GridParams g(o.p, o.n);
  auto counts = [&] { return o.freq_file.empty() ? histogram(data) : read_freq_file(o.freq_file); };
  switch (o.model) {
    case ModelKind::static_freq:
      for (auto c : fit_counts(counts(), session_total_cap(g))) h.frequencies.push_back(static_cast<std::uint32_t>(c));
      break;
    case ModelKind::huffman: {
      if (o.p != 2) throw config_error("huffman model requires P = 2");
      try {
        h.code_lengths = huffman_code_lengths(counts(), 2, o.n);
      } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
      }
      break;
    }
    case ModelKind::unary:
      h.alphabet_size = 1;
      if (!data.empty()) {
        h.unary_symbol = data[0];
        if (std::any_of(data.begin(), data.end(), [&](auto b) { return b != data[0]; }))
          throw config_error("unary model needs a file of one repeated byte");
      }
      break;
    case ModelKind::adaptive:
      break;
  }
  return h;
}

inline std::vector<std::uint8_t> encode_bytes(std::span<const std::uint8_t> data, const Options& o) {
  ContainerHeader h = make_header(o, data);
  std::optional<Model> model;
  try {
    model.emplace(model_from_header(h));
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  if (!model->session_compatible()) throw config_error("model total exceeds P^(N-2)");
  DigitWriter out(h.p);
  Encoder<Model, DigitWriter> enc(*model, out, {h.ar, h.flush});
  for (auto b : data) enc.encode(h.model == ModelKind::unary ? UnaryModel::kStar : symbol_t{b});
  enc.finish();
  return write_container(h, out);
}

inline std::vector<std::uint8_t> decode_bytes(std::span<const std::uint8_t> container) {
  Container c = read_container(container);
  const ContainerHeader& h = c.header;
  std::optional<Model> model;
  try {
    model.emplace(model_from_header(h));
  } catch (const std::invalid_argument& e) {
    throw format_error(std::string("bad model in header: ") + e.what());
  }
  std::vector<std::uint8_t> out;
  try {
    Decoder<Model> dec(*model, c.reader, {h.ar, h.flush, kMaxDecodedBytes});
    while (auto s = dec.next()) out.push_back(h.model == ModelKind::unary ? h.unary_symbol : static_cast<std::uint8_t>(*s));
  } catch (const std::invalid_argument& e) {
    throw format_error(std::string("header not usable for decoding: ") + e.what());
  }
  return out;
}

inline void print_stats(std::span<const std::uint8_t> container, std::ostream& out) {
  Container c = read_container(container);
  const ContainerHeader& h = c.header;
  out << "format:        PADC v" << int{kContainerVersion} << "\n"
      << "P:             " << h.p << "\n"
      << "N:             " << h.n << "\n"
      << "ar:            " << (h.ar ? "on" : "off") << "\n"
      << "flush:         " << to_string(h.flush) << "\n"
      << "model:         " << to_string(h.model) << "\n"
      << "alphabet_size: " << h.alphabet_size << "\n";
  if (h.model == ModelKind::static_freq)
    out << "model_total:   " << std::accumulate(h.frequencies.begin(), h.frequencies.end(), std::uint64_t{0}) << "\n";
  if (h.model == ModelKind::huffman)
    out << "max_code_len:  " << int{*std::max_element(h.code_lengths.begin(), h.code_lengths.end())} << "\n";
  if (h.model == ModelKind::unary) out << "unary_byte:    " << int{h.unary_symbol} << "\n";
  out << "digit_count:   " << c.reader.declared_count() << "\n"
      << "payload_bytes: " << packed_size(h.p, c.reader.declared_count()) << "\n"
      << "file_bytes:    " << container.size() << "\n";
}

// One CSV row per regular file, sorted by name, then a totals row.
inline void run_bench(const std::filesystem::path& dir, const Options& o, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw io_error("not a directory: " + dir.string());
  validate(o);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

  auto bpb = [](std::uint64_t orig, std::uint64_t comp) {
    return orig == 0 ? 0.0 : 8.0 * static_cast<double>(comp) / static_cast<double>(orig);
  };
  out << "file,original_bytes,compressed_bytes,bits_per_byte,seconds,status\n";
  out << std::fixed;
  std::uint64_t total_orig = 0, total_comp = 0;
  double total_secs = 0;
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto data = read_file(path);
      auto packed = encode_bytes(data, o);
      if (decode_bytes(packed) != data) throw std::runtime_error("roundtrip mismatch");
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      total_orig += data.size();
      total_comp += packed.size();
      total_secs += secs;
      out << name << ',' << data.size() << ',' << packed.size() << ',' << std::setprecision(4)
          << bpb(data.size(), packed.size()) << ',' << std::setprecision(3) << secs << ",ok\n";
    } catch (const std::exception& e) {
      err << name << ": " << e.what() << "\n";
      out << name << ",,,,,failed\n";
    }
  }
  out << "TOTAL," << total_orig << ',' << total_comp << ',' << std::setprecision(4) << bpb(total_orig, total_comp)
      << ',' << std::setprecision(3) << total_secs << ",ok\n";
}

inline void add_coding_options(CLI::App& cmd, Options& o) {
  static const std::map<std::string, ModelKind> models = {{"static", ModelKind::static_freq},
                                                          {"adaptive", ModelKind::adaptive},
                                                          {"huffman", ModelKind::huffman},
                                                          {"unary", ModelKind::unary}};
  static const std::map<std::string, FlushMode> flushes = {{"min", FlushMode::min}, {"left", FlushMode::left}};
  cmd.add_option("--model", o.model, "static|adaptive|unary|huffman")
      ->transform(CLI::CheckedTransformer(models, CLI::ignore_case).description(""))
      ->option_text("MODEL (default adaptive)");
  cmd.add_option("-P", o.p, "prime radix");
  cmd.add_option("-N", o.n, "grid level");
  cmd.add_flag("--no-ar", [&o](std::int64_t) { o.ar = false; }, "disable AR rescaling");
  cmd.add_option("--flush", o.flush, "min|left")
      ->transform(CLI::CheckedTransformer(flushes, CLI::ignore_case).description(""))
      ->option_text("MODE (default min)");
  cmd.add_option("--freq-file", o.freq_file, "257 whitespace-separated counts (static, huffman)")
      ->check(CLI::ExistingFile);
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic arithmetic coder"};
  app.require_subcommand(1);
  Options o;
  std::string in_path, out_path;

  auto* enc = app.add_subcommand("encode", "compress a file into a PADC container");
  add_coding_options(*enc, o);
  enc->add_option("input", in_path)->required();
  enc->add_option("output", out_path)->required();

  auto* dec = app.add_subcommand("decode", "restore a file from a PADC container");
  dec->add_option("input", in_path)->required();
  dec->add_option("output", out_path)->required();

  auto* stats = app.add_subcommand("stats", "print container header fields");
  stats->add_option("input", in_path)->required();

  auto* bench = app.add_subcommand("bench", "CSV report over every file in a directory");
  add_coding_options(*bench, o);
  bench->add_option("dir", in_path)->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (enc->parsed()) {
      auto data = read_file(in_path);
      auto packed = encode_bytes(data, o);
      write_file(out_path, packed);
      out << "original: " << data.size() << " bytes, compressed: " << packed.size() << " bytes\n";
    } else if (dec->parsed()) {
      write_file(out_path, decode_bytes(read_file(in_path)));
    } else if (stats->parsed()) {
      print_stats(read_file(in_path), out);
    } else if (bench->parsed()) {
      run_bench(in_path, o, out, err);
    }
  } catch (const config_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const format_error& e) {
    err << "error: " << e.what() << "\n";
    return kFormat;
  } catch (const stream_error& e) {
    err << "error: " << e.what() << "\n";
    return kFormat;
  } catch (const std::exception& e) {
    // anything else while reading a container means it is not one we wrote
    err << "error: " << e.what() << "\n";
    return dec->parsed() || stats->parsed() ? kFormat : kUsage;
  }
  return kOk;
}

}  // namespace padic::cli
