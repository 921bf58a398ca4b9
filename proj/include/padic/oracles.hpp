//
// Brute-force references for tests.
//
// Nothing here includes or calls the library proper: paths are recomputed
// from scratch by enumeration, so agreement with padic_core and the codec is
// evidence rather than a tautology.
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace padic::oracle {

using Digits = std::vector<std::uint8_t>;
using Codebook = std::vector<Digits>;

// Path digits of grid index a at level n: the base-p digits of a, most
// significant first.
inline Digits naive_path(std::uint64_t a, std::uint32_t p, std::uint32_t n) {
  Digits d;
  for (std::uint32_t i = 0; i < n; ++i) {
    d.push_back(static_cast<std::uint8_t>(a % p));
    a /= p;
  }
  std::reverse(d.begin(), d.end());
  return d;
}

inline std::uint64_t naive_modulus(std::uint32_t p, std::uint32_t n) {
  std::uint64_t m = 1;
  for (std::uint32_t i = 0; i < n; ++i) m *= p;
  return m;
}

inline constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 22;

// Longest prefix shared by the paths of all x in [l, r); r == 0 means p^n.
inline Digits brute_common_prefix(std::uint64_t l, std::uint64_t r, std::uint32_t p, std::uint32_t n) {
  const std::uint64_t end = r == 0 ? naive_modulus(p, n) : r;
  if (l >= end) throw std::invalid_argument("empty interval");
  if (end - l > kEnumerationBudget) throw std::length_error("interval too large to enumerate");
  Digits prefix = naive_path(l, p, n);
  for (std::uint64_t x = l + 1; x < end; ++x) {
    Digits path = naive_path(x, p, n);
    std::size_t k = 0;
    while (k < prefix.size() && prefix[k] == path[k]) ++k;
    prefix.resize(k);
  }
  return prefix;
}

// Point of [l, r) whose path, read as sum m_j p^j, is smallest.
inline std::uint64_t brute_select_point(std::uint64_t l, std::uint64_t r, std::uint32_t p, std::uint32_t n) {
  const std::uint64_t end = r == 0 ? naive_modulus(p, n) : r;
  if (l >= end) throw std::invalid_argument("empty interval");
  if (end - l > kEnumerationBudget) throw std::length_error("interval too large to enumerate");
  std::uint64_t best = l, best_value = UINT64_MAX;
  for (std::uint64_t x = l; x < end; ++x) {
    Digits path = naive_path(x, p, n);
    std::uint64_t value = 0, scale = 1;
    for (auto m : path) {
      value += m * scale;
      scale *= p;
    }
    if (value < best_value) {
      best_value = value;
      best = x;
    }
  }
  return best;
}

inline Digits huffman_encode(const Codebook& cb, std::span<const std::uint32_t> message) {
  Digits out;
  for (auto s : message) {
    if (s >= cb.size()) throw std::out_of_range("symbol not in codebook");
    out.insert(out.end(), cb[s].begin(), cb[s].end());
  }
  return out;
}

// Rice code with parameter k: floor(w / 2^k) ones, a zero, then the k low
// bits of w, most significant first.
inline Digits rice_encode(std::uint32_t k, std::uint64_t w) {
  Digits out(w >> k, 1);
  out.push_back(0);
  for (std::uint32_t i = k; i-- > 0;) out.push_back(static_cast<std::uint8_t>((w >> i) & 1u));
  return out;
}

inline double entropy(std::span<const std::uint64_t> freqs) {
  double total = 0;
  for (auto f : freqs) total += static_cast<double>(f);
  double h = 0;
  for (auto f : freqs) {
    if (f == 0) continue;
    const double q = static_cast<double>(f) / total;
    h -= q * std::log2(q);
  }
  return h;
}

// P-ary Huffman tree by the two-queue method; leaves are consumed in
// ascending weight order, internal nodes come out of the second queue in
// ascending order too. Codewords are the child indexes along each root path.
// Requires (n - 1) % (p - 1) == 0.
inline Codebook build_huffman_codebook(std::span<const std::uint64_t> freqs, std::uint32_t p) {
  const std::size_t n = freqs.size();
  if (n == 0 || (n - 1) % (p - 1) != 0) throw std::invalid_argument("symbol count does not fill a P-ary tree");
  Codebook book(n);
  if (n == 1) return book;

  struct Node {
    std::uint64_t weight;
    std::size_t symbol;  // leaves only
    std::vector<std::size_t> children;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> leaves(n);
  for (std::size_t i = 0; i < n; ++i) leaves[i] = i;
  std::stable_sort(leaves.begin(), leaves.end(), [&](auto a, auto b) { return freqs[a] < freqs[b]; });
  std::deque<std::size_t> q1, q2;
  for (auto s : leaves) {
    nodes.push_back({freqs[s], s, {}});
    q1.push_back(nodes.size() - 1);
  }
  auto pop_min = [&] {
    std::deque<std::size_t>* q = &q1;
    if (q1.empty() || (!q2.empty() && nodes[q2.front()].weight < nodes[q1.front()].weight)) q = &q2;
    std::size_t id = q->front();
    q->pop_front();
    return id;
  };
  while (q1.size() + q2.size() > 1) {
    Node parent{0, 0, {}};
    for (std::uint32_t k = 0; k < p; ++k) {
      std::size_t c = pop_min();
      parent.weight += nodes[c].weight;
      parent.children.push_back(c);
    }
    nodes.push_back(std::move(parent));
    q2.push_back(nodes.size() - 1);
  }
  // walk from the root
  std::vector<std::pair<std::size_t, Digits>> stack{{q2.front(), {}}};
  while (!stack.empty()) {
    auto [id, prefix] = std::move(stack.back());
    stack.pop_back();
    if (nodes[id].children.empty()) {
      book[nodes[id].symbol] = prefix;
      continue;
    }
    for (std::size_t k = 0; k < nodes[id].children.size(); ++k) {
      Digits next = prefix;
      next.push_back(static_cast<std::uint8_t>(k));
      stack.emplace_back(nodes[id].children[k], std::move(next));
    }
  }
  return book;
}

}  // namespace padic::oracle
