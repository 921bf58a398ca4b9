//
// Encoder and decoder loops.
//
// Per symbol the encoder runs
//
//   model.code -> AR exit (if pending) -> PR (if no AR pending) -> AR loop
//
// PR emits the path prefix shared by every point of [l, r) and shifts it out
// of both edges. AR handles intervals straddling a level-1 point n with paths
// l = (n-1, P-1, ...) and r = (n, 0, ...): it deletes path digit 1 of both
// edges, which doubles (P-fold) the interval around the fixed point
// (n, 0, ..., 0) without emitting anything. The pending expansions are
// counted in spn and resolved once the interval falls to one side of n:
//
//   left side  [n, ...):   emit n,   then spn zeros
//   right side [..., n):   emit n-1, then spn copies of P-1
//
// With AR disabled, a straddling interval narrower than P^(N-2)+1 is cut at
// the level-1 point to its larger side so PR can continue. Either way every
// symbol boundary leaves w >= P^(N-2)+1.
//
// The decoder repeats the same interval arithmetic and keeps the code point g
// as a grid index: each digit shifted out of the edges is shifted out of g and
// a fresh stream digit enters at the bottom.
//

#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "padic/core.hpp"
#include "padic/digitio.hpp"
#include "padic/models.hpp"

namespace padic {

struct stream_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CoderState {
  index_t l = 0;
  index_t r = 0;
  std::uint32_t sp = 0;   // stable point of pending AR, 0 when none
  std::uint64_t spn = 0;  // number of pending AR applications

  Interval interval() const { return {l, r}; }
  friend bool operator==(const CoderState&, const CoderState&) = default;
};

struct CodecOptions {
  bool ar = true;
  FlushMode flush = FlushMode::min;
  // Decoder only. A zero-extended tail parked on an AR stable point can keep
  // yielding symbols without consuming real digits, so a corrupt stream may
  // never reach EOM; this caps the damage.
  std::uint64_t max_symbols = UINT64_MAX;
};

template <typename S>
concept DigitSink = requires(S s, digit_t d, std::span<const digit_t> seq, std::uint64_t n) {
  s.push_digit(d);
  s.push_digits(seq);
  s.push_repeat(d, n);
};

// Unpacked digits, mostly for tests and traces.
struct DigitVectorSink {
  std::vector<digit_t> digits;
  void push_digit(digit_t d) { digits.push_back(d); }
  void push_digits(std::span<const digit_t> seq) { digits.insert(digits.end(), seq.begin(), seq.end()); }
  void push_repeat(digit_t d, std::uint64_t n) { digits.insert(digits.end(), n, d); }
};

// Smallest width the coder leaves behind after each symbol.
inline index_t width_floor(const GridParams& g) { return g.pow(g.n() - 2) + 1; }

// Shift the first n path digits out of a grid index: lift(res(a^, n), n)^.
inline index_t shift_out(index_t a, std::uint32_t n, const GridParams& g) {
  return to_index(lift(res(to_path(a, g), n), static_cast<int>(n)));
}

// Delete path digit 1: lift(cut(a^, 1, 1), 1)^.
inline index_t cut_second(index_t a, const GridParams& g) {
  return to_index(lift(cut(to_path(a, g), 1, 1), 1));
}

// Emits the common path of [l, r) and rescales; returns its length.
template <DigitSink Sink>
std::uint32_t pr_step(CoderState& st, const GridParams& g, Sink& out) {
  const std::uint32_t n = common_path_len(st.interval(), g);
  if (n == 0) return 0;
  out.push_digits(ext(to_path(st.l, g), n).digits());
  st.l = shift_out(st.l, n, g);
  st.r = shift_out(st.r, n, g);
  return n;
}

inline bool ar_check(const Interval& iv, const GridParams& g) {
  if (g.n() < 2) return false;
  const int l0 = path_digit(iv.l, 0, g), r0 = path_digit(iv.r, 0, g);
  return r0 - l0 == 1 && path_digit(iv.l, 1, g) == g.p() - 1 && path_digit(iv.r, 1, g) == 0;
}

inline void ar_apply(CoderState& st, const GridParams& g) {
  if (st.sp == 0) st.sp = path_digit(st.r, 0, g);
  ++st.spn;
  st.l = cut_second(st.l, g);
  st.r = cut_second(st.r, g);
}

inline bool to_left(std::uint32_t sp, index_t l, const GridParams& g) { return path_digit(l, 0, g) >= sp; }

// r lies left of sp, or r is the stable point (sp, 0, ..., 0) itself.
inline bool to_right(std::uint32_t sp, index_t r, const GridParams& g) {
  return path_digit(r, 0, g) < sp || r == sp * g.pow(g.n() - 1);
}

// Resolves pending AR once [l, r) has left the stable point; returns whether
// it did.
template <DigitSink Sink>
bool ar_exit(CoderState& st, const GridParams& g, Sink& out) {
  if (st.spn == 0) throw std::logic_error("ar_exit without pending AR");
  if (to_left(st.sp, st.l, g)) {
    out.push_digit(static_cast<digit_t>(st.sp));
    out.push_repeat(0, st.spn);
  } else if (to_right(st.sp, st.r, g)) {
    out.push_digit(static_cast<digit_t>(st.sp - 1));
    out.push_repeat(static_cast<digit_t>(g.p() - 1), st.spn);
  } else {
    return false;
  }
  st.l = shift_out(st.l, 1, g);
  st.r = shift_out(st.r, 1, g);
  st.sp = 0;
  st.spn = 0;
  return true;
}

// PR-only mode: keep the larger side of the level-1 point inside [l, r).
inline void split_straddle(CoderState& st, const GridParams& g) {
  const index_t hi = right_edge(st.interval(), g);
  const index_t mid = path_digit(hi - 1, 0, g) * g.pow(g.n() - 1);
  if (!(st.l < mid && mid < hi)) throw std::logic_error("split_straddle: interval does not straddle a level-1 point");
  if (mid - st.l >= hi - mid)
    st.r = mid;
  else
    st.l = mid;
}

namespace detail {

template <typename ModelT>
void check_session(const ModelT& model) {
  const GridParams& g = model.params();
  if (g.n() < 2) throw std::invalid_argument("coding needs N >= 2");
  if (!model.session_compatible()) throw std::invalid_argument("model total exceeds P^(N-2) for this grid");
}

}  // namespace detail

template <typename ModelT, DigitSink Sink>
class Encoder {
 public:
  Encoder(ModelT& model, Sink& out, CodecOptions opt = {}) : model_(model), out_(out), opt_(opt), g_(model.params()) {
    detail::check_session(model_);
  }

  // Codes any model symbol (EOM included) without finishing the stream.
  void encode(symbol_t s) {
    Interval iv = model_.code(s, st_.interval());
    st_.l = iv.l;
    st_.r = iv.r;
    if (st_.spn != 0) ar_exit(st_, g_, out_);
    if (st_.spn == 0) pr_step(st_, g_, out_);
    if (opt_.ar) {
      while (ar_check(st_.interval(), g_)) ar_apply(st_, g_);
    } else {
      while (width(st_.interval(), g_) < width_floor(g_)) {
        split_straddle(st_, g_);
        pr_step(st_, g_, out_);
      }
    }
    if (width(st_.interval(), g_) < width_floor(g_)) throw std::logic_error("interval fell below the width floor");
    if (trace_) trace_->push_back(st_);
  }

  // Codes EOM and flushes the final point.
  void finish() {
    Interval iv = model_.code(model_.eom(), st_.interval());
    st_.l = iv.l;
    st_.r = iv.r;
    if (st_.spn != 0) ar_exit(st_, g_, out_);
    if (st_.spn == 0) {
      const bool min = opt_.flush == FlushMode::min;
      const index_t q = min ? select_point(st_.interval(), g_) : st_.l;
      const DigitVec path = to_path(q, g_);
      out_.push_digits(ext(path, min ? lnz(path) : path.size()).digits());
    } else {
      // the stable point itself is a level-1 point inside [l, r)
      out_.push_digit(static_cast<digit_t>(st_.sp));
    }
  }

  const CoderState& state() const { return st_; }
  void set_trace(std::vector<CoderState>* trace) { trace_ = trace; }

 private:
  ModelT& model_;
  Sink& out_;
  CodecOptions opt_;
  GridParams g_;
  CoderState st_;
  std::vector<CoderState>* trace_ = nullptr;
};

template <typename ModelT>
class Decoder {
 public:
  Decoder(ModelT& model, DigitReader& in, CodecOptions opt = {}) : model_(model), in_(in), opt_(opt), g_(model.params()) {
    detail::check_session(model_);
    if (in_.p() != g_.p()) throw std::invalid_argument("stream radix differs from model P");
    for (std::uint32_t j = 0; j < g_.n(); ++j) g_point_ = g_point_ * g_.p() + read();
  }

  // Next symbol, or nullopt once EOM is decoded.
  std::optional<symbol_t> next() {
    if (done_) return std::nullopt;
    Decoded d;
    try {
      d = model_.decode(g_point_, st_.interval());
    } catch (const std::out_of_range&) {
      throw stream_error("malformed stream: code point outside interval");
    }
    if (d.symbol == model_.eom()) {
      done_ = true;
      return std::nullopt;
    }
    if (++count_ > opt_.max_symbols) throw stream_error("malformed stream: symbol limit reached before EOM");
    st_.l = d.iv.l;
    st_.r = d.iv.r;
    if (st_.spn != 0 && (to_left(st_.sp, st_.l, g_) || to_right(st_.sp, st_.r, g_))) {
      shift(1);
      st_.sp = 0;
      st_.spn = 0;
    }
    if (st_.spn == 0) shift(common_path_len(st_.interval(), g_));
    if (opt_.ar) {
      while (ar_check(st_.interval(), g_)) {
        ar_apply(st_, g_);
        g_point_ = cut_second(g_point_, g_) + read();
      }
    } else {
      while (width(st_.interval(), g_) < width_floor(g_)) {
        split_straddle(st_, g_);
        const index_t off = (g_point_ + g_.modulus() - st_.l) % g_.modulus();
        if (off >= width(st_.interval(), g_)) throw stream_error("malformed stream: code point outside interval");
        shift(common_path_len(st_.interval(), g_));
      }
    }
    if (trace_) trace_->push_back(st_);
    return d.symbol;
  }

  const CoderState& state() const { return st_; }
  index_t point() const { return g_point_; }
  void set_trace(std::vector<CoderState>* trace) { trace_ = trace; }

 private:
  // Each pending AR step has read a digit the encoder only settles later (or
  // never, if the stream ends on the stable point), hence the + spn slack.
  digit_t read() {
    if (in_.consumed() >= in_.declared_count() + g_.n() + st_.spn)
      throw stream_error("malformed stream: digits exhausted before EOM");
    return in_.get_digit();
  }

  void shift(std::uint32_t n) {
    if (n == 0) return;
    st_.l = shift_out(st_.l, n, g_);
    st_.r = shift_out(st_.r, n, g_);
    g_point_ = shift_out(g_point_, n, g_);
    index_t fresh = 0;
    for (std::uint32_t j = 0; j < n; ++j) fresh = fresh * g_.p() + read();
    g_point_ += fresh;
  }

  ModelT& model_;
  DigitReader& in_;
  CodecOptions opt_;
  GridParams g_;
  CoderState st_;
  index_t g_point_ = 0;
  bool done_ = false;
  std::uint64_t count_ = 0;
  std::vector<CoderState>* trace_ = nullptr;
};

template <typename ModelT, DigitSink Sink>
void encode(std::span<const symbol_t> message, ModelT& model, Sink& out, CodecOptions opt = {}) {
  Encoder<ModelT, Sink> enc(model, out, opt);
  for (symbol_t s : message) {
    if (s >= model.eom()) throw std::out_of_range("symbol not in alphabet: " + std::to_string(s));
    enc.encode(s);
  }
  enc.finish();
}

template <typename ModelT>
std::vector<digit_t> encode_digits(std::span<const symbol_t> message, ModelT& model, CodecOptions opt = {}) {
  DigitVectorSink out;
  encode(message, model, out, opt);
  return std::move(out.digits);
}

template <typename ModelT>
std::vector<symbol_t> decode(DigitReader& in, ModelT& model, CodecOptions opt = {}) {
  Decoder<ModelT> dec(model, in, opt);
  std::vector<symbol_t> out;
  while (auto s = dec.next()) out.push_back(*s);
  return out;
}

}  // namespace padic
