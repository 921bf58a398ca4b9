// Small tour: the Huffman and Golomb-Rice special cases, then an ordinary
// adaptive roundtrip over a few grid settings.
#include <iostream>
#include <string>

#include "padic/padic.hpp"

using namespace padic;

namespace {

std::string str(std::span<const digit_t> d) {
  std::string s;
  for (auto x : d) s += char('0' + x);
  return s;
}

void huffman_case() {
  std::cout << "huffman codebook a:000 b:001 c:10 d:01 e:11 on G(2^3)\n";
  Codebook cb = {{0, 0, 0}, {0, 0, 1}, {1, 0}, {0, 1}, {1, 1}};
  HuffmanModel model(cb, GridParams(2, 3));
  DigitVectorSink sink;
  Encoder<HuffmanModel, DigitVectorSink> enc(model, sink);
  for (char c : std::string("cabde")) {
    const std::size_t before = sink.digits.size();
    enc.encode(static_cast<symbol_t>(c - 'a'));
    std::cout << "  " << c << " -> " << str(std::span(sink.digits).subspan(before)) << "  state ("
              << enc.state().l << ", " << enc.state().r << ")\n";
  }
}

void golomb_case() {
  std::cout << "unary model on G(2^4), flush=left: W -> code\n";
  for (std::size_t w = 0; w < 16; ++w) {
    UnaryModel model(GridParams(2, 4));
    std::vector<symbol_t> msg(w, UnaryModel::kStar);
    auto digits = encode_digits(msg, model, {true, FlushMode::left});
    std::cout << "  " << w << (w < 10 ? "  " : " ") << str(digits) << (w % 2 ? "\n" : "\t");
  }
}

void adaptive_case() {
  const std::string text = "p-adic coding pushes out the common path of both interval edges";
  std::vector<symbol_t> msg(text.begin(), text.end());
  std::cout << "adaptive byte model, " << msg.size() << " symbols\n";
  for (auto [p, n] : {std::pair{2u, 31u}, {3u, 20u}, {5u, 14u}}) {
    for (bool ar : {true, false}) {
      GridParams g(p, n);
      AdaptiveModel enc_model(256, g), dec_model(256, g);
      auto digits = encode_digits(msg, enc_model, {ar});
      DigitReader reader = DigitReader::from_digits(p, digits);
      bool same = decode(reader, dec_model, {ar}) == msg;
      std::cout << "  P=" << p << " N=" << n << " ar=" << (ar ? "on " : "off") << "  " << digits.size()
                << " digits, roundtrip " << (same ? "ok" : "FAILED") << "\n";
    }
  }
}

}  // namespace

int main() {
  huffman_case();
  golomb_case();
  adaptive_case();
}
