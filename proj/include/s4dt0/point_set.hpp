/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace s4dt0 {

/// Maximum number of worlds/points of a finite frame or space.
inline constexpr std::size_t kMaxPoints = 64;

/// A subset of {0, ..., n-1} for n <= 64, stored as a bit mask.
class PointSet {
 public:
  constexpr PointSet() = default;
  constexpr explicit PointSet(std::uint64_t bits) : bits_(bits) {}
  PointSet(std::initializer_list<std::size_t> points) {
    for (auto p : points) insert(p);
  }

  static constexpr PointSet full(std::size_t n) {
    return PointSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr PointSet single(std::size_t p) { return PointSet(std::uint64_t{1} << p); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t p) const { return (bits_ >> p) & 1U; }
  constexpr bool subsetOf(PointSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(PointSet other) const { return (bits_ & other.bits_) != 0; }
  /// Smallest member; undefined on the empty set.
  constexpr std::size_t first() const { return static_cast<std::size_t>(std::countr_zero(bits_)); }

  constexpr void insert(std::size_t p) { bits_ |= std::uint64_t{1} << p; }
  constexpr void erase(std::size_t p) { bits_ &= ~(std::uint64_t{1} << p); }

  constexpr PointSet complement(std::size_t n) const { return PointSet(~bits_ & full(n).bits_); }

  constexpr PointSet operator|(PointSet o) const { return PointSet(bits_ | o.bits_); }
  constexpr PointSet operator&(PointSet o) const { return PointSet(bits_ & o.bits_); }
  constexpr PointSet operator-(PointSet o) const { return PointSet(bits_ & ~o.bits_); }
  constexpr PointSet& operator|=(PointSet o) { bits_ |= o.bits_; return *this; }
  constexpr PointSet& operator&=(PointSet o) { bits_ &= o.bits_; return *this; }

  constexpr auto operator<=>(const PointSet&) const = default;

  template <class Fn>
  void forEach(Fn&& fn) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) fn(static_cast<std::size_t>(std::countr_zero(b)));
  }

  std::vector<std::size_t> toVector() const {
    std::vector<std::size_t> out;
    forEach([&](std::size_t p) { out.push_back(p); });
    return out;
  }

  std::string toString() const {
    std::string s = "{";
    bool firstItem = true;
    forEach([&](std::size_t p) {
      if (!firstItem) s += ",";
      s += std::to_string(p);
      firstItem = false;
    });
    return s + "}";
  }

 private:
  std::uint64_t bits_ = 0;
};

/// A binary relation on {0, ..., n-1}: row x is the successor set of x.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : rows_(n) {}

  static Relation identity(std::size_t n) {
    Relation r(n);
    for (std::size_t x = 0; x < n; ++x) r.rows_[x].insert(x);
    return r;
  }
  static Relation universal(std::size_t n) {
    Relation r(n);
    for (auto& row : r.rows_) row = PointSet::full(n);
    return r;
  }
  /// Decodes bit x*n+y of `code` as the pair (x, y).
  static Relation fromCode(std::size_t n, std::uint64_t code) {
    Relation r(n);
    for (std::size_t x = 0; x < n; ++x)
      r.rows_[x] = PointSet((code >> (x * n)) & PointSet::full(n).bits());
    return r;
  }

  std::uint64_t code() const {
    std::uint64_t c = 0;
    for (std::size_t x = 0; x < rows_.size(); ++x) c |= rows_[x].bits() << (x * rows_.size());
    return c;
  }

  std::size_t size() const { return rows_.size(); }
  bool operator()(std::size_t x, std::size_t y) const { return rows_[x].contains(y); }
  void add(std::size_t x, std::size_t y) { rows_[x].insert(y); }
  void remove(std::size_t x, std::size_t y) { rows_[x].erase(y); }
  PointSet successors(std::size_t x) const { return rows_[x]; }
  PointSet image(PointSet s) const {
    PointSet out;
    s.forEach([&](std::size_t x) { out |= rows_[x]; });
    return out;
  }
  PointSet predecessors(std::size_t y) const {
    PointSet out;
    for (std::size_t x = 0; x < rows_.size(); ++x)
      if (rows_[x].contains(y)) out.insert(x);
    return out;
  }

  bool reflexive() const {
    for (std::size_t x = 0; x < rows_.size(); ++x)
      if (!rows_[x].contains(x)) return false;
    return true;
  }
  bool transitive() const {
    for (std::size_t x = 0; x < rows_.size(); ++x)
      if (!image(rows_[x]).subsetOf(rows_[x])) return false;
    return true;
  }
  bool symmetric() const {
    for (std::size_t x = 0; x < rows_.size(); ++x)
      for (std::size_t y = 0; y < rows_.size(); ++y)
        if ((*this)(x, y) != (*this)(y, x)) return false;
    return true;
  }
  bool antisymmetric() const {
    for (std::size_t x = 0; x < rows_.size(); ++x)
      for (std::size_t y = x + 1; y < rows_.size(); ++y)
        if ((*this)(x, y) && (*this)(y, x)) return false;
    return true;
  }

  Relation unionWith(const Relation& o) const {
    Relation r = *this;
    for (std::size_t x = 0; x < rows_.size(); ++x) r.rows_[x] |= o.rows_[x];
    return r;
  }

  Relation reflexiveTransitiveClosure() const {
    Relation r = unionWith(identity(rows_.size()));
    // Warshall over bit rows.
    for (std::size_t k = 0; k < rows_.size(); ++k)
      for (std::size_t x = 0; x < rows_.size(); ++x)
        if (r.rows_[x].contains(k)) r.rows_[x] |= r.rows_[k];
    return r;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < rows_.size(); ++x)
      rows_[x].forEach([&](std::size_t y) { out.emplace_back(x, y); });
    return out;
  }

  bool operator==(const Relation&) const = default;

 private:
  std::vector<PointSet> rows_;
};

}  // namespace s4dt0
