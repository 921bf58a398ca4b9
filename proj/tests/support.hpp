// Random configurations for roundtrip tests.
#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "padic/codec.hpp"
#include "padic/oracles.hpp"

namespace padic::testing {

struct Trial {
  std::uint32_t p = 2;
  std::uint32_t n = 8;
  ModelKind kind = ModelKind::adaptive;
  std::size_t alphabet = 1;
  bool ar = true;
  FlushMode flush = FlushMode::min;
  std::vector<std::uint64_t> weights;  // source distribution incl. EOM slot (unused for sampling)
  std::vector<symbol_t> message;

  std::string describe() const {
    std::ostringstream os;
    os << "P=" << p << " N=" << n << " model=" << to_string(kind) << " S=" << alphabet << " ar=" << ar
       << " flush=" << to_string(flush) << " len=" << message.size();
    return os.str();
  }
};

// Largest alphabet the model kind accepts on this grid, capped at want.
inline std::size_t fit_alphabet(ModelKind kind, const GridParams& g, std::size_t want) {
  const index_t cap = session_total_cap(g);
  switch (kind) {
    case ModelKind::unary:
      return 1;
    case ModelKind::adaptive:
      return std::min<std::size_t>(want, cap / 2 - 1);
    case ModelKind::static_freq:
      return std::min<std::size_t>(want, cap - 1);
    case ModelKind::huffman: {
      // a full P-ary tree needs S % (P-1) == 0
      std::size_t s = std::max<std::size_t>(want, g.p() - 1);
      s -= s % (g.p() - 1);
      return std::min<std::size_t>(s, static_cast<std::size_t>(std::min<index_t>(g.modulus() - 1, 1u << 16)));
    }
  }
  return 1;
}

// Skewed weights so that models see both wide and narrow cells.
inline std::vector<std::uint64_t> random_weights(std::size_t count, std::mt19937_64& rng, std::uint64_t max_total) {
  std::vector<std::uint64_t> w(count, 1);
  std::uint64_t budget = max_total > count ? max_total - count : 0;
  for (std::size_t i = 0; i < count && budget > 0; ++i) {
    const std::uint64_t room = std::min<std::uint64_t>(budget, std::uint64_t{1} << (rng() % 12));
    const std::uint64_t add = rng() % (room + 1);
    w[i] += add;
    budget -= add;
  }
  std::shuffle(w.begin(), w.end(), rng);
  return w;
}

inline Model make_model(const Trial& t) {
  GridParams g(t.p, t.n);
  switch (t.kind) {
    case ModelKind::static_freq:
      return StaticModel(t.weights, g);
    case ModelKind::adaptive:
      return AdaptiveModel(t.alphabet, g);
    case ModelKind::huffman: {
      auto lengths = huffman_code_lengths(t.weights, t.p, t.n);
      return HuffmanModel(canonical_codebook(lengths, t.p), g);
    }
    case ModelKind::unary:
      return UnaryModel(g);
  }
  throw std::logic_error("unknown model kind");
}

inline std::vector<symbol_t> sample_message(std::span<const std::uint64_t> weights, std::size_t length,
                                            std::mt19937_64& rng) {
  // EOM slot excluded from the source
  std::discrete_distribution<symbol_t> dist(weights.begin(), weights.end() - 1);
  std::vector<symbol_t> m(length);
  for (auto& s : m) s = dist(rng);
  return m;
}

inline Trial random_trial(std::mt19937_64& rng, std::uint32_t p, ModelKind kind, std::size_t max_len) {
  Trial t;
  t.p = p;
  t.n = p == 2 ? 6 + rng() % 26 : 4 + rng() % 9;
  t.kind = kind;
  GridParams g(t.p, t.n);
  t.alphabet = fit_alphabet(kind, g, 1 + rng() % 64);
  t.ar = rng() % 2;
  t.flush = rng() % 2 ? FlushMode::min : FlushMode::left;
  const std::uint64_t cap = kind == ModelKind::static_freq ? session_total_cap(g) : std::uint64_t{1} << 20;
  t.weights = random_weights(t.alphabet + 1, rng, cap);
  const std::size_t len = rng() % (max_len + 1);
  t.message = kind == ModelKind::unary ? std::vector<symbol_t>(len, 0) : sample_message(t.weights, len, rng);
  return t;
}

struct RoundtripResult {
  bool ok = false;
  std::string error;
  std::vector<digit_t> digits;
  std::vector<CoderState> enc_trace;
  std::vector<CoderState> dec_trace;
};

inline RoundtripResult roundtrip(const Trial& t) {
  RoundtripResult res;
  try {
    Model enc_model = make_model(t);
    Model dec_model = enc_model;
    CodecOptions opt{t.ar, t.flush};
    DigitVectorSink sink;
    {
      Encoder<Model, DigitVectorSink> enc(enc_model, sink, opt);
      enc.set_trace(&res.enc_trace);
      for (symbol_t s : t.message) enc.encode(s);
      enc.finish();
    }
    res.digits = sink.digits;
    DigitReader reader = DigitReader::from_digits(t.p, res.digits);
    Decoder<Model> dec(dec_model, reader, opt);
    dec.set_trace(&res.dec_trace);
    std::vector<symbol_t> out;
    while (auto s = dec.next()) out.push_back(*s);
    if (out != t.message) {
      res.error = "decoded message differs";
    } else if (res.enc_trace != res.dec_trace) {
      res.error = "encoder/decoder state traces differ";
    } else {
      res.ok = true;
    }
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  return res;
}

}  // namespace padic::testing
