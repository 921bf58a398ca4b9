//
// Probability models.
//
// A model splits the current interval [l, r) of G(P^N) into one subinterval
// per symbol and, given a point g of [l, r), tells which subinterval holds it.
// The last symbol index of every model is EOM. Encoder and decoder call the
// same model functions in the same order, so adaptive state stays in sync.
//
// Subdivision for cumulative counts C[0] = 0 < C[1] < ... < C[S+1] = T and
// width w:
//
//   l_new = l + floor(w * C[i]   / T)   (mod P^N)
//   r_new = l + floor(w * C[i+1] / T)   (mod P^N)
//
// Every symbol gets a nonempty cell whenever w >= T. The coder keeps
// w > P^(N-2) after each symbol, hence the T <= P^(N-2) cap for sessions.
//

#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "padic/core.hpp"
#include "padic/digitio.hpp"

namespace padic {

using symbol_t = std::uint32_t;

struct Decoded {
  Interval iv;
  symbol_t symbol;
  friend bool operator==(const Decoded&, const Decoded&) = default;
};

// Largest total a model may use inside a coding session.
inline index_t session_total_cap(const GridParams& g) { return g.n() >= 2 ? g.pow(g.n() - 2) : 0; }

namespace detail {

inline Interval subdivide(const Interval& iv, index_t c_lo, index_t c_hi, index_t total, const GridParams& g) {
  const index_t w = width(iv, g);
  const index_t lo = static_cast<index_t>(wide_t{w} * c_lo / total);
  const index_t hi = static_cast<index_t>(wide_t{w} * c_hi / total);
  if (lo == hi) throw std::domain_error("interval too narrow for symbol");
  return {(iv.l + lo) % g.modulus(), (iv.l + hi) % g.modulus()};
}

// Index k with floor(w C[k] / T) <= (g - l) < floor(w C[k+1] / T).
inline std::size_t locate(index_t point, const Interval& iv, std::span<const index_t> cum, const GridParams& g) {
  check_index(point, g);
  const index_t w = width(iv, g);
  const index_t off = (point + g.modulus() - iv.l) % g.modulus();
  if (off >= w) throw std::out_of_range("point outside the current interval");
  const index_t total = cum.back();
  const index_t q = static_cast<index_t>((wide_t{off + 1} * total - 1) / w);
  auto it = std::upper_bound(cum.begin(), cum.end(), q);
  return static_cast<std::size_t>(it - cum.begin()) - 1;
}

}  // namespace detail

// Cumulative counts; entry S (the last symbol) is EOM.
class WeightTable {
 public:
  WeightTable() = default;
  explicit WeightTable(std::span<const std::uint64_t> counts) {
    if (counts.empty()) throw std::invalid_argument("weight table needs at least one symbol");
    cum_.assign(counts.size() + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] == 0) throw std::invalid_argument("symbol " + std::to_string(i) + " has zero count");
      cum_[i + 1] = cum_[i] + counts[i];
    }
  }

  std::size_t symbol_count() const { return cum_.size() - 1; }
  index_t total() const { return cum_.back(); }
  index_t count(std::size_t s) const { return cum_[s + 1] - cum_[s]; }
  std::span<const index_t> cum() const { return cum_; }

  Interval code(symbol_t s, const Interval& iv, const GridParams& g) const {
    if (s >= symbol_count()) throw std::out_of_range("symbol not in alphabet: " + std::to_string(s));
    return detail::subdivide(iv, cum_[s], cum_[s + 1], total(), g);
  }

  Decoded decode(index_t point, const Interval& iv, const GridParams& g) const {
    auto s = static_cast<symbol_t>(detail::locate(point, iv, cum_, g));
    return {code(s, iv, g), s};
  }

 private:
  std::vector<index_t> cum_;
};

class StaticModel {
 public:
  StaticModel(std::span<const std::uint64_t> counts, const GridParams& g) : table_(counts), grid_(g) {
    if (table_.total() > g.modulus()) throw std::invalid_argument("total count too large for grid");
  }

  const GridParams& params() const { return grid_; }
  const WeightTable& table() const { return table_; }
  std::size_t symbol_count() const { return table_.symbol_count(); }
  symbol_t eom() const { return static_cast<symbol_t>(symbol_count() - 1); }
  bool session_compatible() const { return table_.total() <= session_total_cap(grid_); }

  Interval code(symbol_t s, const Interval& iv) { return table_.code(s, iv, grid_); }
  Decoded decode(index_t point, const Interval& iv) { return table_.decode(point, iv, grid_); }

 private:
  WeightTable table_;
  GridParams grid_;
};

// Order-0 adaptive counts starting at 1. Counts are halved (floor, min 1)
// before an increment would push the total past P^(N-2).
class AdaptiveModel {
 public:
  AdaptiveModel(std::size_t alphabet_size, const GridParams& g)
      : counts_(alphabet_size + 1, 1), grid_(g), cap_(session_total_cap(g)) {
    if (alphabet_size < 1) throw std::invalid_argument("alphabet must have at least one symbol");
    if (2 * counts_.size() > cap_) throw std::invalid_argument("alphabet too large for grid: need 2(S+1) <= P^(N-2)");
    rebuild();
  }

  const GridParams& params() const { return grid_; }
  const WeightTable& table() const { return table_; }
  std::size_t symbol_count() const { return counts_.size(); }
  symbol_t eom() const { return static_cast<symbol_t>(counts_.size() - 1); }
  bool session_compatible() const { return true; }

  Interval code(symbol_t s, const Interval& iv) {
    Interval out = table_.code(s, iv, grid_);
    update(s);
    return out;
  }

  Decoded decode(index_t point, const Interval& iv) {
    Decoded d = table_.decode(point, iv, grid_);
    update(d.symbol);
    return d;
  }

  void update(symbol_t s) {
    if (table_.total() + 1 > cap_) {
      for (auto& c : counts_) c = std::max<std::uint64_t>(1, c / 2);
    }
    ++counts_[s];
    rebuild();
  }

 private:
  void rebuild() { table_ = WeightTable(counts_); }

  std::vector<std::uint64_t> counts_;
  WeightTable table_;
  GridParams grid_;
  index_t cap_;
};

using Codeword = std::vector<digit_t>;
// Codeword of each symbol, indexed by symbol; the last entry is EOM.
using Codebook = std::vector<Codeword>;

// Each symbol owns the whole tree node named by its codeword: the cell
// starting at lift(h(s), N - cl(s)) with width P^(N - cl(s)).
class HuffmanModel {
 public:
  HuffmanModel(Codebook codebook, const GridParams& g) : book_(std::move(codebook)), grid_(g) {
    if (book_.empty()) throw std::invalid_argument("empty codebook");
    std::size_t max_len = 0;
    for (const auto& cw : book_) {
      for (digit_t d : cw)
        if (d >= g.p()) throw std::invalid_argument("codeword digit out of range for P");
      max_len = std::max(max_len, cw.size());
    }
    if (max_len > g.n()) throw std::invalid_argument("codeword longer than grid level N");
    max_len_ = static_cast<std::uint32_t>(max_len);

    // Order symbols by their cell at level max_len and require an exact tiling.
    std::vector<std::pair<index_t, symbol_t>> cells;
    for (symbol_t s = 0; s < book_.size(); ++s) cells.emplace_back(start_at(s, max_len_), s);
    std::sort(cells.begin(), cells.end());
    const index_t total = g.pow(max_len_);
    cum_.assign(1, 0);
    pos_.assign(book_.size(), 0);
    order_.clear();
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const auto [start, s] = cells[k];
      if (start != cum_.back()) throw std::invalid_argument("codebook is not a complete prefix code");
      cum_.push_back(start + g.pow(max_len_ - static_cast<std::uint32_t>(book_[s].size())));
      pos_[s] = k;
      order_.push_back(s);
    }
    if (cum_.back() != total) throw std::invalid_argument("codebook is not a complete prefix code");
  }

  const GridParams& params() const { return grid_; }
  const Codebook& codebook() const { return book_; }
  std::size_t symbol_count() const { return book_.size(); }
  symbol_t eom() const { return static_cast<symbol_t>(book_.size() - 1); }
  bool session_compatible() const { return true; }

  // Start index of symbol s in G(P^N).
  index_t start_index(symbol_t s) const { return start_at(s, grid_.n()); }
  index_t cell_width(symbol_t s) const { return grid_.pow(grid_.n() - static_cast<std::uint32_t>(book_.at(s).size())); }

  Interval code(symbol_t s, const Interval& iv) {
    if (s >= book_.size()) throw std::out_of_range("symbol not in codebook: " + std::to_string(s));
    return detail::subdivide(iv, cum_[pos_[s]], cum_[pos_[s] + 1], cum_.back(), grid_);
  }

  Decoded decode(index_t point, const Interval& iv) {
    symbol_t s = order_[detail::locate(point, iv, cum_, grid_)];
    return {code(s, iv), s};
  }

 private:
  index_t start_at(symbol_t s, std::uint32_t level) const {
    const Codeword& cw = book_[s];
    DigitVec path(grid_.p(), cw.size());
    for (std::size_t j = 0; j < cw.size(); ++j) path[j] = cw[j];
    return to_index(lift(path, static_cast<int>(level) - static_cast<int>(cw.size())));
  }

  Codebook book_;
  GridParams grid_;
  std::uint32_t max_len_ = 0;
  std::vector<index_t> cum_;
  std::vector<std::size_t> pos_;
  std::vector<symbol_t> order_;
};

// Single-symbol model: the message length is all there is to code.
// Symbol 0 is '*', symbol 1 is EOM.
class UnaryModel {
 public:
  static constexpr symbol_t kStar = 0;
  static constexpr symbol_t kEom = 1;

  explicit UnaryModel(const GridParams& g) : grid_(g) {}

  const GridParams& params() const { return grid_; }
  std::size_t symbol_count() const { return 2; }
  symbol_t eom() const { return kEom; }
  bool session_compatible() const { return grid_.n() >= 2; }

  Interval code(symbol_t s, const Interval& iv) {
    if (s > kEom) throw std::out_of_range("unary model has symbols 0 and 1 only");
    if (width(iv, grid_) < 2) throw std::domain_error("interval too narrow for symbol");
    const index_t last = (iv.r + grid_.modulus() - 1) % grid_.modulus();
    return s == kStar ? Interval{iv.l, last} : Interval{last, iv.r};
  }

  Decoded decode(index_t point, const Interval& iv) {
    check_index(point, grid_);
    if ((point + grid_.modulus() - iv.l) % grid_.modulus() >= width(iv, grid_))
      throw std::out_of_range("point outside the current interval");
    const index_t last = (iv.r + grid_.modulus() - 1) % grid_.modulus();
    if (point == last) return {iv, kEom};
    return {Interval{iv.l, last}, kStar};
  }

 private:
  GridParams grid_;
};

// Runtime-selected model.
class Model {
 public:
  using Variant = std::variant<StaticModel, AdaptiveModel, HuffmanModel, UnaryModel>;

  template <typename M>
    requires(!std::same_as<std::remove_cvref_t<M>, Model>)
  Model(M m) : m_(std::move(m)) {}

  ModelKind kind() const {
    static constexpr ModelKind kinds[] = {ModelKind::static_freq, ModelKind::adaptive, ModelKind::huffman,
                                          ModelKind::unary};
    return kinds[m_.index()];
  }

  const GridParams& params() const {
    return std::visit([](const auto& m) -> const GridParams& { return m.params(); }, m_);
  }
  std::size_t symbol_count() const {
    return std::visit([](const auto& m) { return m.symbol_count(); }, m_);
  }
  symbol_t eom() const {
    return std::visit([](const auto& m) { return m.eom(); }, m_);
  }
  bool session_compatible() const {
    return std::visit([](const auto& m) { return m.session_compatible(); }, m_);
  }
  Interval code(symbol_t s, const Interval& iv) {
    return std::visit([&](auto& m) { return m.code(s, iv); }, m_);
  }
  Decoded decode(index_t point, const Interval& iv) {
    return std::visit([&](auto& m) { return m.decode(point, iv); }, m_);
  }

  const Variant& variant() const { return m_; }

 private:
  Variant m_;
};

// Huffman code lengths for a P-ary tree, limited to max_len by repeatedly
// flattening the counts. The symbol count n must satisfy (n-1) % (P-1) == 0
// so the tree is full.
inline std::vector<std::uint8_t> huffman_code_lengths(std::span<const std::uint64_t> freqs, std::uint32_t p,
                                                      std::uint32_t max_len) {
  const std::size_t n = freqs.size();
  if (n == 0) throw std::invalid_argument("no symbols");
  if ((n - 1) % (p - 1) != 0) throw std::invalid_argument("symbol count does not fill a P-ary tree");
  if (n == 1) return {0};
  std::vector<std::uint64_t> w(freqs.begin(), freqs.end());
  for (;;) {
    using Node = std::pair<std::uint64_t, std::size_t>;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
    std::vector<std::size_t> parent(n, 0);
    for (std::size_t i = 0; i < n; ++i) heap.emplace(w[i], i);
    std::size_t next = n;
    while (heap.size() > 1) {
      std::uint64_t sum = 0;
      for (std::uint32_t k = 0; k < p; ++k) {
        auto [weight, id] = heap.top();
        heap.pop();
        sum += weight;
        parent[id] = next;
      }
      parent.push_back(0);
      heap.emplace(sum, next++);
    }
    const std::size_t root = next - 1;
    std::vector<std::uint8_t> lengths(n);
    std::uint32_t longest = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t depth = 0;
      for (std::size_t v = i; v != root; v = parent[v]) ++depth;
      lengths[i] = static_cast<std::uint8_t>(std::min<std::uint32_t>(depth, 255));
      longest = std::max(longest, depth);
    }
    if (longest <= max_len) return lengths;
    if (std::all_of(w.begin(), w.end(), [&](auto x) { return x == w[0]; }))
      throw std::invalid_argument("alphabet too large for the code length limit");
    for (auto& x : w) x = (x + 1) / 2;
  }
}

// Canonical codewords for the given lengths: shorter codes first, ties by
// symbol index, consecutive values at each length.
inline Codebook canonical_codebook(std::span<const std::uint8_t> lengths, std::uint32_t p) {
  std::vector<symbol_t> order(lengths.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return lengths[a] < lengths[b]; });
  Codebook book(lengths.size());
  wide_t code = 0;
  std::uint32_t prev = order.empty() ? 0 : lengths[order.front()];
  for (symbol_t s : order) {
    const std::uint32_t len = lengths[s];
    if (len > 64) throw std::invalid_argument("code length too large");
    for (std::uint32_t k = prev; k < len; ++k) code *= p;
    prev = len;
    Codeword cw(len);
    wide_t v = code;
    for (std::uint32_t j = len; j-- > 0;) {
      cw[j] = static_cast<digit_t>(v % p);
      v /= p;
    }
    if (v != 0) throw std::invalid_argument("code lengths violate the Kraft inequality");
    book[s] = std::move(cw);
    ++code;
  }
  return book;
}

}  // namespace padic
