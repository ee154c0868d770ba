/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <iterator>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "s4dt0/syntax.hpp"

namespace s4dt0 {

/// A formula flattened into postfix order with variables replaced by
/// indices into `variables` (sorted by name).
struct Program {
  struct Instr {
    Connective op;
    std::size_t var = 0;
  };
  std::vector<Instr> code;
  std::vector<std::string> variables;
};

namespace detail {

inline void emit(const Formula& f, const std::vector<std::string>& vars, std::vector<Program::Instr>& code) {
  switch (arity(f.kind())) {
    case 0:
      break;
    case 1:
      emit(f.operand(), vars, code);
      break;
    default:
      emit(f.left(), vars, code);
      emit(f.right(), vars, code);
  }
  Program::Instr in{f.kind(), 0};
  if (f.kind() == Connective::Var)
    in.var = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), f.name()) - vars.begin());
  code.push_back(in);
}

}  // namespace detail

inline Program compile(const Formula& f) {
  Program p;
  auto vs = variables(f);
  p.variables.assign(vs.begin(), vs.end());
  detail::emit(f, p.variables, p.code);
  return p;
}

/// The operations a semantics must provide to evaluate formulas as truth sets.
template <class A>
concept SetAlgebra = requires(const A& a, const typename A::Set& s) {
  { a.full() } -> std::convertible_to<typename A::Set>;
  { a.empty() } -> std::convertible_to<typename A::Set>;
  { a.complement(s) } -> std::convertible_to<typename A::Set>;
  { a.meet(s, s) } -> std::convertible_to<typename A::Set>;
  { a.join(s, s) } -> std::convertible_to<typename A::Set>;
  { a.box(s) } -> std::convertible_to<typename A::Set>;
  { a.diamond(s) } -> std::convertible_to<typename A::Set>;
  { a.diffBox(s) } -> std::convertible_to<typename A::Set>;
  { a.diffDiamond(s) } -> std::convertible_to<typename A::Set>;
  { a.forAll(s) } -> std::convertible_to<typename A::Set>;
};

/// Truth set of `prog` under `valuation` (indexed like `prog.variables`).
template <SetAlgebra A>
typename A::Set evaluate(const Program& prog, const A& alg, std::span<const typename A::Set> valuation) {
  using Set = typename A::Set;
  std::vector<Set> stack;
  stack.reserve(prog.code.size());
  auto pop = [&] {
    Set s = std::move(stack.back());
    stack.pop_back();
    return s;
  };
  for (const auto& in : prog.code) {
    switch (in.op) {
      case Connective::Var: stack.push_back(valuation[in.var]); break;
      case Connective::Bottom: stack.push_back(alg.empty()); break;
      case Connective::Top: stack.push_back(alg.full()); break;
      case Connective::Not: stack.push_back(alg.complement(pop())); break;
      case Connective::Box: stack.push_back(alg.box(pop())); break;
      case Connective::Diamond: stack.push_back(alg.diamond(pop())); break;
      case Connective::DiffBox: stack.push_back(alg.diffBox(pop())); break;
      case Connective::DiffDiamond: stack.push_back(alg.diffDiamond(pop())); break;
      case Connective::ForAll: stack.push_back(alg.forAll(pop())); break;
      default: {
        Set b = pop();
        Set a = pop();
        switch (in.op) {
          case Connective::And: stack.push_back(alg.meet(a, b)); break;
          case Connective::Or: stack.push_back(alg.join(a, b)); break;
          case Connective::Implies: stack.push_back(alg.join(alg.complement(a), b)); break;
          default: {  // Iff
            Set ab = alg.join(alg.complement(a), b);
            Set ba = alg.join(alg.complement(b), a);
            stack.push_back(alg.meet(ab, ba));
          }
        }
      }
    }
  }
  return stack.back();
}

/// Evaluates with a name-keyed valuation; unlisted variables are false everywhere.
template <SetAlgebra A>
typename A::Set evaluate(const Formula& f, const A& alg, const std::map<std::string, typename A::Set>& valuation) {
  Program prog = compile(f);
  std::vector<typename A::Set> vals;
  vals.reserve(prog.variables.size());
  for (const auto& v : prog.variables) {
    auto it = valuation.find(v);
    vals.push_back(it == valuation.end() ? alg.empty() : it->second);
  }
  return evaluate(prog, alg, std::span<const typename A::Set>(vals));
}

}  // namespace s4dt0
