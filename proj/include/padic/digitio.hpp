//
// Base-P digit streams and the PADC container.
//
// Packing: for P = 2 eight digits go into each byte, first digit in the most
// significant bit, last byte zero padded. For any other P each digit takes a
// whole byte. Readers zero-extend past the declared digit count, which is what
// lets the encoder drop trailing zeros of its final point.
//
// Container layout (little-endian):
//
//   0..3   "PADC"
//   4      version (1)
//   5      P
//   6      N
//   7      flags: bit0 AR enabled, bit1 flush mode (0 min, 1 left)
//   8      model id: 0 static, 1 adaptive, 2 huffman, 3 unary
//   9..10  alphabet size S (u16, EOM not counted)
//   ...    model payload
//            static:   (S+1) u32 frequencies, EOM last
//            huffman:  (S+1) u8 code lengths, EOM last, canonical, P = 2
//            unary:    1 byte, the byte value the symbol stands for
//            adaptive: nothing
//   ...    u64 digit count
//   ...    packed digits
//

#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "padic/core.hpp"

namespace padic {

struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::size_t packed_size(std::uint32_t p, std::uint64_t digit_count) {
  return p == 2 ? static_cast<std::size_t>((digit_count + 7) / 8) : static_cast<std::size_t>(digit_count);
}

class DigitWriter {
 public:
  explicit DigitWriter(std::uint32_t p) : p_(p) {}

  void push_digit(digit_t d) {
    if (d >= p_) throw std::invalid_argument("digit out of range for P");
    if (p_ == 2) {
      if (count_ % 8 == 0) bytes_.push_back(0);
      if (d) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (count_ % 8));
    } else {
      bytes_.push_back(d);
    }
    ++count_;
  }

  void push_digits(std::span<const digit_t> seq) {
    for (digit_t d : seq) push_digit(d);
  }

  void push_repeat(digit_t d, std::uint64_t n) {
    if (d >= p_) throw std::invalid_argument("digit out of range for P");
    for (std::uint64_t i = 0; i < n; ++i) push_digit(d);
  }

  std::uint32_t p() const { return p_; }
  std::uint64_t digit_count() const { return count_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::uint32_t p_;
  std::uint64_t count_ = 0;
  std::vector<std::uint8_t> bytes_;
};

class DigitReader {
 public:
  DigitReader(std::uint32_t p, std::vector<std::uint8_t> payload, std::uint64_t declared_count)
      : p_(p), payload_(std::move(payload)), declared_(declared_count) {
    if (payload_.size() < packed_size(p_, declared_))
      throw format_error("truncated payload");
  }

  // Reader over an unpacked digit sequence.
  static DigitReader from_digits(std::uint32_t p, std::span<const digit_t> digits) {
    DigitWriter w(p);
    w.push_digits(digits);
    return DigitReader(p, w.bytes(), w.digit_count());
  }

  digit_t get_digit() {
    std::uint64_t i = cursor_++;
    if (i >= declared_) return 0;
    if (p_ == 2) return (payload_[i / 8] >> (7 - i % 8)) & 1u;
    digit_t d = payload_[i];
    if (d >= p_) throw format_error("digit out of range for P in payload");
    return d;
  }

  std::vector<digit_t> get_digits(std::size_t n) {
    std::vector<digit_t> out(n);
    for (auto& d : out) d = get_digit();
    return out;
  }

  std::uint32_t p() const { return p_; }
  // Digits handed out so far, zero-extension included.
  std::uint64_t consumed() const { return cursor_; }
  std::uint64_t declared_count() const { return declared_; }

 private:
  std::uint32_t p_;
  std::vector<std::uint8_t> payload_;
  std::uint64_t declared_;
  std::uint64_t cursor_ = 0;
};

enum class FlushMode : std::uint8_t { min = 0, left = 1 };
enum class ModelKind : std::uint8_t { static_freq = 0, adaptive = 1, huffman = 2, unary = 3 };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::static_freq: return "static";
    case ModelKind::adaptive: return "adaptive";
    case ModelKind::huffman: return "huffman";
    case ModelKind::unary: return "unary";
  }
  return "?";
}

inline const char* to_string(FlushMode f) { return f == FlushMode::min ? "min" : "left"; }

struct ContainerHeader {
  std::uint32_t p = 2;
  std::uint32_t n = 31;
  bool ar = true;
  FlushMode flush = FlushMode::min;
  ModelKind model = ModelKind::adaptive;
  std::uint16_t alphabet_size = 256;
  std::vector<std::uint32_t> frequencies;   // static: S+1 entries
  std::vector<std::uint8_t> code_lengths;   // huffman: S+1 entries
  std::uint8_t unary_symbol = 0;            // unary only

  friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;
};

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr char kMagic[4] = {'P', 'A', 'D', 'C'};

namespace detail {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class ByteCursor {
 public:
  explicit ByteCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get_le() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw format_error("truncated header");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

inline void validate(const ContainerHeader& h) {
  if (h.p > 255 || !is_prime(h.p)) throw format_error("P not prime");
  try {
    GridParams g(h.p, h.n);
  } catch (const std::invalid_argument&) {
    throw format_error("N out of range");
  }
  const std::size_t symbols = std::size_t{h.alphabet_size} + 1;
  switch (h.model) {
    case ModelKind::static_freq:
      if (h.frequencies.size() != symbols) throw format_error("static model needs S+1 frequencies");
      break;
    case ModelKind::huffman:
      if (h.p != 2) throw format_error("huffman container requires P = 2");
      if (h.code_lengths.size() != symbols) throw format_error("huffman model needs S+1 code lengths");
      break;
    case ModelKind::unary:
      if (h.alphabet_size != 1) throw format_error("unary model has alphabet size 1");
      break;
    case ModelKind::adaptive:
      break;
    default:
      throw format_error("unknown model id");
  }
}

}  // namespace detail

inline std::vector<std::uint8_t> write_container(const ContainerHeader& h, const DigitWriter& digits) {
  detail::validate(h);
  if (digits.p() != h.p) throw std::invalid_argument("digit stream radix differs from header P");
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(kContainerVersion);
  out.push_back(static_cast<std::uint8_t>(h.p));
  out.push_back(static_cast<std::uint8_t>(h.n));
  out.push_back(static_cast<std::uint8_t>((h.ar ? 1u : 0u) | (h.flush == FlushMode::left ? 2u : 0u)));
  out.push_back(static_cast<std::uint8_t>(h.model));
  detail::put_le<std::uint16_t>(out, h.alphabet_size);
  switch (h.model) {
    case ModelKind::static_freq:
      for (auto f : h.frequencies) detail::put_le<std::uint32_t>(out, f);
      break;
    case ModelKind::huffman:
      out.insert(out.end(), h.code_lengths.begin(), h.code_lengths.end());
      break;
    case ModelKind::unary:
      out.push_back(h.unary_symbol);
      break;
    case ModelKind::adaptive:
      break;
  }
  detail::put_le<std::uint64_t>(out, digits.digit_count());
  out.insert(out.end(), digits.bytes().begin(), digits.bytes().end());
  return out;
}

struct Container {
  ContainerHeader header;
  DigitReader reader;
};

inline Container read_container(std::span<const std::uint8_t> bytes) {
  detail::ByteCursor in(bytes);
  ContainerHeader h;
  char magic[4];
  for (char& c : magic) c = static_cast<char>(in.get_le<std::uint8_t>());
  if (std::memcmp(magic, kMagic, 4) != 0) throw format_error("bad magic");
  if (in.get_le<std::uint8_t>() != kContainerVersion) throw format_error("unsupported version");
  h.p = in.get_le<std::uint8_t>();
  h.n = in.get_le<std::uint8_t>();
  const std::uint8_t flags = in.get_le<std::uint8_t>();
  if (flags & ~3u) throw format_error("unknown flag bits");
  h.ar = flags & 1u;
  h.flush = (flags & 2u) ? FlushMode::left : FlushMode::min;
  const std::uint8_t model = in.get_le<std::uint8_t>();
  if (model > 3) throw format_error("unknown model id");
  h.model = static_cast<ModelKind>(model);
  h.alphabet_size = in.get_le<std::uint16_t>();
  const std::size_t symbols = std::size_t{h.alphabet_size} + 1;
  switch (h.model) {
    case ModelKind::static_freq:
      h.frequencies.resize(symbols);
      for (auto& f : h.frequencies) f = in.get_le<std::uint32_t>();
      break;
    case ModelKind::huffman:
      h.code_lengths.resize(symbols);
      for (auto& c : h.code_lengths) c = in.get_le<std::uint8_t>();
      break;
    case ModelKind::unary:
      h.unary_symbol = in.get_le<std::uint8_t>();
      break;
    case ModelKind::adaptive:
      break;
  }
  detail::validate(h);
  const std::uint64_t count = in.get_le<std::uint64_t>();
  auto rest = in.rest();
  const std::uint32_t radix = h.p;
  const std::uint64_t max_digits = radix == 2 ? std::uint64_t{rest.size()} * 8 : rest.size();
  if (count > max_digits || rest.size() < packed_size(radix, count)) throw format_error("truncated payload");
  std::vector<std::uint8_t> payload(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(packed_size(radix, count)));
  DigitReader reader(radix, std::move(payload), count);
  return Container{std::move(h), std::move(reader)};
}

}  // namespace padic
