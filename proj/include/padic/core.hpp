//
// Finite-ring p-adic primitives.
//
// A grid G(P^N) splits [0, 1) into P^N cells named by their left edge index
// k in [0, P^N). The same point is reached from the root of the P-ary coding
// tree by a path of N digits m_0 .. m_{N-1}; m_0 picks the level-1 cell,
// m_1 the cell inside it, and so on. Read as a p-adic integer the path is
//
//   x = m_0 + m_1 P + m_2 P^2 + ... + m_{N-1} P^{N-1}
//
// while the index is the same digits read the other way round:
//
//   k = m_0 P^{N-1} + m_1 P^{N-2} + ... + m_{N-1}
//
// so converting between the two is a digit reversal. Two paths share exactly
// ord_p(x - y) leading digits, which is what the coder uses to decide how many
// digits it can emit.
//
// Ring convention: an interval [l, r) stores its right edge modulo P^N, so
// r == 0 means the right edge is 1.0 (index P^N) and (0, 0) is the full
// interval.
//

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

namespace padic {

using index_t = std::uint64_t;
using digit_t = std::uint8_t;
using wide_t = unsigned __int128;

// Longest path a DigitVec can hold; P^N must also stay below 2^62.
inline constexpr std::size_t kMaxLevel = 64;
inline constexpr index_t kMaxModulus = index_t{1} << 62;

constexpr bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

class GridParams {
 public:
  GridParams(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {
    if (!is_prime(p))
      throw std::invalid_argument("P must be prime, got " + std::to_string(p));
    if (n < 1 || n >= kMaxLevel)
      throw std::invalid_argument("N out of range: " + std::to_string(n));
    pow_[0] = 1;
    for (std::uint32_t j = 1; j <= n; ++j) {
      if (pow_[j - 1] > kMaxModulus / p)
        throw std::invalid_argument("P^N does not fit the index arithmetic");
      pow_[j] = pow_[j - 1] * p;
    }
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t n() const { return n_; }
  // P^N, the ring size and number of grid cells.
  index_t modulus() const { return pow_[n_]; }
  // P^j for 0 <= j <= N.
  index_t pow(std::uint32_t j) const { return pow_[j]; }

  bool operator==(const GridParams& o) const { return p_ == o.p_ && n_ == o.n_; }

 private:
  std::uint32_t p_;
  std::uint32_t n_;
  std::array<index_t, kMaxLevel + 1> pow_{};
};

// A tree path (p-adic integer truncated to size() digits), digit 0 first.
class DigitVec {
 public:
  DigitVec() = default;
  DigitVec(std::uint32_t p, std::size_t size) : p_(p), size_(size) {
    if (size > kMaxLevel) throw std::length_error("DigitVec longer than kMaxLevel");
  }
  DigitVec(std::uint32_t p, std::initializer_list<int> digits) : DigitVec(p, digits.size()) {
    std::size_t j = 0;
    for (int d : digits) {
      if (d < 0 || static_cast<std::uint32_t>(d) >= p)
        throw std::invalid_argument("digit out of range for P");
      digits_[j++] = static_cast<digit_t>(d);
    }
  }

  std::uint32_t p() const { return p_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  // x[j] = m_j
  digit_t operator[](std::size_t j) const { return digits_[j]; }
  digit_t& operator[](std::size_t j) { return digits_[j]; }

  std::span<const digit_t> digits() const { return {digits_.data(), size_}; }

  void push_back(digit_t d) {
    if (size_ == kMaxLevel) throw std::length_error("DigitVec full");
    digits_[size_++] = d;
  }

  // Value as a p-adic integer: sum of m_j P^j.
  index_t value() const {
    index_t v = 0;
    for (std::size_t j = size_; j-- > 0;) v = v * p_ + digits_[j];
    return v;
  }

  friend bool operator==(const DigitVec& a, const DigitVec& b) {
    return a.p_ == b.p_ && std::equal(a.digits().begin(), a.digits().end(),
                                      b.digits().begin(), b.digits().end());
  }

 private:
  std::uint32_t p_ = 2;
  std::size_t size_ = 0;
  std::array<digit_t, kMaxLevel> digits_{};
};

// Half-open interval of grid indexes; r == 0 stands for P^N.
struct Interval {
  index_t l = 0;
  index_t r = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline void check_index(index_t a, const GridParams& g) {
  if (a >= g.modulus()) throw std::out_of_range("grid index outside [0, P^N)");
}

// Number of cells in [l, r) under the ring convention.
inline index_t width(const Interval& iv, const GridParams& g) {
  index_t w = (iv.r + g.modulus() - iv.l) % g.modulus();
  return w == 0 ? g.modulus() : w;
}

// Right edge as a plain integer in [1, P^N].
inline index_t right_edge(const Interval& iv, const GridParams& g) {
  return iv.r == 0 ? g.modulus() : iv.r;
}

inline index_t negate(index_t k, const GridParams& g) {
  return (g.modulus() - k) % g.modulus();
}

// Path digit j of grid index a, i.e. a^[j], without building the whole path.
inline digit_t path_digit(index_t a, std::uint32_t j, const GridParams& g) {
  return static_cast<digit_t>((a / g.pow(g.n() - 1 - j)) % g.p());
}

inline DigitVec to_path(index_t a, const GridParams& g) {
  check_index(a, g);
  DigitVec x(g.p(), g.n());
  if (g.p() == 2) {
    for (std::uint32_t j = 0; j < g.n(); ++j) x[g.n() - 1 - j] = static_cast<digit_t>((a >> j) & 1u);
  } else {
    for (std::uint32_t j = 0; j < g.n(); ++j) {
      x[g.n() - 1 - j] = static_cast<digit_t>(a % g.p());
      a /= g.p();
    }
  }
  return x;
}

// Inverse of to_path for a path of any length: the digits read most
// significant first form the index at level x.size().
inline index_t to_index(const DigitVec& x) {
  index_t a = 0;
  for (digit_t d : x.digits()) a = a * x.p() + d;
  return a;
}

inline std::uint32_t ord_p(index_t x, std::uint32_t p) {
  if (x == 0) throw std::domain_error("ord_p is undefined at zero");
  std::uint32_t r = 0;
  while (x % p == 0) {
    x /= p;
    ++r;
  }
  return r;
}

// Length of the common leading path of two p-adic values in [0, P^N).
inline std::uint32_t com(index_t x, index_t y, const GridParams& g) {
  if (x == y) return g.n();
  return ord_p(x > y ? x - y : y - x, g.p());
}

// Longest path prefix shared by every point of [l, r).
inline std::uint32_t common_path_len(const Interval& iv, const GridParams& g) {
  check_index(iv.l, g);
  check_index(iv.r, g);
  if (iv.l == iv.r && iv.l != 0) throw std::invalid_argument("empty interval");
  index_t last = (iv.r + g.modulus() - 1) % g.modulus();
  return com(to_path(iv.l, g).value(), to_path(last, g).value(), g);
}

// First j digits of x.
inline DigitVec ext(const DigitVec& x, std::size_t j) {
  if (j > x.size()) throw std::out_of_range("ext: j exceeds path length");
  DigitVec out(x.p(), j);
  for (std::size_t i = 0; i < j; ++i) out[i] = x[i];
  return out;
}
inline DigitVec ext(const DigitVec& x) { return x; }

// Drop the first j digits and divide out P^j.
inline DigitVec res(const DigitVec& x, std::size_t j) {
  if (j > x.size()) throw std::out_of_range("res: j exceeds path length");
  DigitVec out(x.p(), x.size() - j);
  for (std::size_t i = j; i < x.size(); ++i) out[i - j] = x[i];
  return out;
}

// Append j zero digits (j >= 0) or strip -j trailing zeros (j < 0).
inline DigitVec lift(const DigitVec& x, int j) {
  if (j >= 0) {
    DigitVec out = x;
    for (int i = 0; i < j; ++i) out.push_back(0);
    return out;
  }
  std::size_t drop = static_cast<std::size_t>(-j);
  if (drop > x.size()) throw std::out_of_range("lift: cannot remove more digits than present");
  for (std::size_t i = x.size() - drop; i < x.size(); ++i)
    if (x[i] != 0) throw std::invalid_argument("lift: negative lift over a nonzero digit");
  return ext(x, x.size() - drop);
}

// Remove m digits starting at position pos.
inline DigitVec cut(const DigitVec& x, std::size_t pos, std::size_t m) {
  if (pos + m > x.size()) throw std::out_of_range("cut: range exceeds path length");
  DigitVec out(x.p(), x.size() - m);
  std::size_t o = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (i < pos || i >= pos + m) out[o++] = x[i];
  return out;
}

// Count of digits through the last nonzero one; 0 for the zero path.
inline std::size_t lnz(const DigitVec& x) {
  for (std::size_t j = x.size(); j > 0; --j)
    if (x[j - 1] != 0) return j;
  return 0;
}

inline std::size_t hpl(const DigitVec& x, const DigitVec& y) { return std::max(lnz(x), lnz(y)); }

// The point of [l, r) whose path is the smallest p-adic integer.
//
// Path digit N-1 is index digit 0, so the greedy fixes index digits from the
// least significant end: at each step take the smallest digit for which some
// x in [l, r) still matches the suffix chosen so far.
inline index_t select_point(const Interval& iv, const GridParams& g) {
  check_index(iv.l, g);
  check_index(iv.r, g);
  if (iv.l == iv.r && iv.l != 0) throw std::invalid_argument("select_point: empty interval");
  const index_t lo = iv.l;
  const index_t hi = right_edge(iv, g);
  index_t suffix = 0;  // index value of the fixed low digits
  for (std::uint32_t k = 0; k < g.n(); ++k) {
    const index_t step = g.pow(k + 1);
    bool found = false;
    for (std::uint32_t d = 0; d < g.p(); ++d) {
      index_t c = suffix + d * g.pow(k);
      // smallest x >= lo with x = c (mod P^(k+1))
      index_t x = lo + (c + step - lo % step) % step;
      if (x < hi) {
        suffix = c;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("select_point: no feasible digit");
  }
  return suffix;
}

}  // namespace padic
