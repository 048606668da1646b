// Strictly increasing multi-indices, the permutation sign eps_{j,J}^K and the
// weights a^{I,J} attached to coefficient slots of (s,t)-forms.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dbarlab/errors.hpp"
#include "dbarlab/weights.hpp"

namespace dbarlab {

using Coordinate = std::uint32_t;  // 1-based coordinate index

/// Strictly increasing tuple of coordinate indices. The empty tuple is valid
/// and stands for the |J| = 0 slot.
class MultiIndex {
 public:
  MultiIndex() = default;

  explicit MultiIndex(std::vector<Coordinate> entries) : entries_(std::move(entries)) {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (entries_[k] == 0) throw InvalidArg("multi-index entries are 1-based");
      if (k + 1 < entries_.size() && entries_[k] >= entries_[k + 1]) {
        throw InvalidArg("multi-index entries must be strictly increasing");
      }
    }
  }

  MultiIndex(std::initializer_list<Coordinate> entries)
      : MultiIndex(std::vector<Coordinate>(entries)) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Coordinate operator[](std::size_t k) const { return entries_[k]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const std::vector<Coordinate>& entries() const { return entries_; }

  Coordinate max() const { return entries_.empty() ? 0 : entries_.back(); }

  bool contains(Coordinate j) const {
    return std::binary_search(entries_.begin(), entries_.end(), j);
  }

  /// The tuple with j removed; j must be present.
  MultiIndex without(Coordinate j) const {
    std::vector<Coordinate> out;
    out.reserve(entries_.size() - 1);
    for (Coordinate e : entries_) {
      if (e != j) out.push_back(e);
    }
    if (out.size() != entries_.size() - 1) throw InvalidArg("without: index not present");
    MultiIndex m;
    m.entries_ = std::move(out);
    return m;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(entries_[k]);
    }
    return s + ")";
  }

  friend bool operator==(const MultiIndex& x, const MultiIndex& y) {
    return x.entries_ == y.entries_;
  }
  friend bool operator!=(const MultiIndex& x, const MultiIndex& y) { return !(x == y); }
  friend bool operator<(const MultiIndex& x, const MultiIndex& y) {
    return x.entries_ < y.entries_;
  }

 private:
  std::vector<Coordinate> entries_;
};

/// Sign of the permutation taking (j, j_1, ..., j_t) to K, where J = (j_1,...,j_t).
/// Returns 0 unless K is the disjoint union {j} u J (in particular 0 when j is
/// already in J). Moving j past the entries of J smaller than it costs one
/// transposition each.
inline int eps_sign(Coordinate j, const MultiIndex& J, const MultiIndex& K) {
  if (j == 0) return 0;
  if (J.contains(j)) return 0;
  if (K.size() != J.size() + 1) return 0;
  std::size_t smaller = 0;
  std::size_t kpos = 0;
  for (Coordinate e : J) {
    if (e < j) ++smaller;
  }
  // verify K == sorted {j} u J by a merge walk
  std::size_t ji = 0;
  bool used_j = false;
  for (; kpos < K.size(); ++kpos) {
    Coordinate expect;
    if (!used_j && (ji == J.size() || j < J[ji])) {
      expect = j;
      used_j = true;
    } else {
      expect = J[ji++];
    }
    if (K[kpos] != expect) return 0;
  }
  return (smaller % 2 == 0) ? 1 : -1;
}

struct Insertion {
  int sign;          // +1 or -1
  MultiIndex index;  // the sorted union {j} u J
};

/// Sorted insertion of j into J together with the permutation sign; absent
/// when j already occurs in J.
inline std::optional<Insertion> insert(Coordinate j, const MultiIndex& J) {
  if (j == 0) throw InvalidArg("insert: coordinate must be positive");
  if (J.contains(j)) return std::nullopt;
  std::vector<Coordinate> merged;
  merged.reserve(J.size() + 1);
  std::size_t smaller = 0;
  bool placed = false;
  for (Coordinate e : J) {
    if (!placed && j < e) {
      merged.push_back(j);
      placed = true;
    }
    if (!placed) ++smaller;
    merged.push_back(e);
  }
  if (!placed) merged.push_back(j);
  return Insertion{(smaller % 2 == 0) ? 1 : -1, MultiIndex(std::move(merged))};
}

/// a^{I,J} = prod_l a_{i_l}^2 * prod_r a_{j_r}^2; the empty product is 1.
inline Rational weight_aIJ(const MultiIndex& I, const MultiIndex& J, const WeightSequence& w) {
  Rational out = 1;
  for (Coordinate i : I) out *= w.a(i) * w.a(i);
  for (Coordinate j : J) out *= w.a(j) * w.a(j);
  return out;
}

/// All strictly increasing multi-indices of the given cardinality with entries
/// in 1..n, in lexicographic order. Count is binomial(n, card).
inline std::vector<MultiIndex> enumerate_indices(std::size_t card, std::size_t n) {
  if (card > n) {
    throw InvalidArg("enumerate_indices: cardinality " + std::to_string(card) +
                     " exceeds dimension " + std::to_string(n));
  }
  std::vector<MultiIndex> out;
  if (card == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<Coordinate> cur(card);
  for (std::size_t k = 0; k < card; ++k) cur[k] = static_cast<Coordinate>(k + 1);
  while (true) {
    out.emplace_back(cur);
    // advance to the next combination
    std::size_t k = card;
    while (k > 0 && cur[k - 1] == n - card + k) --k;
    if (k == 0) break;
    ++cur[k - 1];
    for (std::size_t l = k; l < card; ++l) cur[l] = cur[l - 1] + 1;
  }
  return out;
}

}  // namespace dbarlab
