/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "s4dt0/kripke.hpp"
#include "s4dt0/syntax.hpp"

namespace s4dt0 {

/// Random formulas of bounded depth over a fixed variable list.
class FormulaGenerator {
 public:
  FormulaGenerator(std::uint64_t seed, std::vector<std::string> vars = {"p", "q"})
      : rng_(seed), vars_(std::move(vars)) {}

  Formula operator()(std::size_t maxDepth) { return generate(maxDepth); }

  std::mt19937_64& rng() { return rng_; }

 private:
  Formula generate(std::size_t depth) {
    std::uniform_int_distribution<int> leafPick(0, 9);
    if (depth == 0 || std::bernoulli_distribution(0.2)(rng_)) {
      int k = leafPick(rng_);
      if (k == 0) return bottom();
      if (k == 1) return top();
      std::uniform_int_distribution<std::size_t> v(0, vars_.size() - 1);
      return var(vars_[v(rng_)]);
    }
    static constexpr Connective kOps[] = {
        Connective::Not, Connective::And, Connective::Or, Connective::Implies, Connective::Iff,
        Connective::Box, Connective::Diamond, Connective::DiffBox, Connective::DiffDiamond, Connective::ForAll,
    };
    std::uniform_int_distribution<std::size_t> op(0, std::size(kOps) - 1);
    const Connective c = kOps[op(rng_)];
    if (arity(c) == 1) return Formula::unary(c, generate(depth - 1));
    Formula l = generate(depth - 1);
    return Formula::binary(c, l, generate(depth - 1));
  }

  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
};

inline PointSet randomSubset(std::mt19937_64& rng, std::size_t n) {
  return PointSet(rng() & PointSet::full(n).bits());
}

inline Valuation randomValuation(std::mt19937_64& rng, std::size_t n, const std::vector<std::string>& vars) {
  Valuation v;
  for (const auto& name : vars) v.emplace(name, randomSubset(rng, n));
  return v;
}

/// Random preorder as the reflexive-transitive closure of a sparse relation.
inline Relation randomPreorder(std::mt19937_64& rng, std::size_t n) {
  Relation r(n);
  std::bernoulli_distribution edge(1.5 / static_cast<double>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (x != y && edge(rng)) r.add(x, y);
  return r.reflexiveTransitiveClosure();
}

/// Random S4D-cone rooted at a random world: RD holds between all distinct
/// worlds, loops at random. With `t0` set, loops are added until no cluster
/// has two loop-free worlds.
inline KripkeFrame randomS4DCone(std::mt19937_64& rng, std::size_t n, bool t0 = false) {
  Relation r = randomPreorder(rng, n);
  const std::size_t root = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  for (std::size_t y = 0; y < n; ++y) r.add(root, y);
  r = r.reflexiveTransitiveClosure();
  Relation rd = Relation::universal(n);
  std::bernoulli_distribution loop(0.5);
  for (std::size_t x = 0; x < n; ++x)
    if (!loop(rng)) rd.remove(x, x);
  if (t0) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        if (r(x, y) && r(y, x) && !rd(x, x) && !rd(y, y)) rd.add(y, y);
  }
  return KripkeFrame(std::move(r), std::move(rd));
}

}  // namespace s4dt0
