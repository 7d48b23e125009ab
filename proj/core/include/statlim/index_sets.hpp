#pragma once
// Symbolic subsets of the positive integers. Every descriptor supports exact
// membership, exact counting |S ∩ [1,N]| at arbitrary big-integer prefixes
// (closed forms, no enumeration), rank enumeration, and closed-form
// asymptotic density where one exists.

#include "statlim/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace statlim {

enum class Card { finite, infinite, unknown };

enum class IndexSetKind {
  empty,
  all,
  finite_list,
  ap,
  scaled_odd,
  squares,
  power_multiples,
  powers,
  window,
  tail,
  factorial_filter,
  union_,
  intersect,
  diff,
};

class IndexSet {
 public:
  IndexSet() : IndexSet(empty()) {}

  static IndexSet empty();
  static IndexSet all();
  // Elements must fit in the 10^7 cap; sorted and deduplicated on entry.
  static IndexSet finite_list(std::vector<uint64_t> elems);
  // {n >= 1 : n ≡ r (mod m)}
  static IndexSet ap(uint64_t r, uint64_t m);
  // {2^k (2j - 1) : j >= 1}, the numbers with 2-adic valuation exactly k.
  static IndexSet scaled_odd(uint32_t k);
  // {j^2 : j >= 1}
  static IndexSet squares();
  // {n : b^e divides n}
  static IndexSet power_multiples(uint64_t b, uint32_t e);
  // {b^j : j >= 1}
  static IndexSet powers(uint64_t b);
  // inner ∩ (a, b]
  static IndexSet window(IndexSet inner, uint64_t a, uint64_t b);
  // inner \ {1..cutoff}
  static IndexSet tail(IndexSet inner, uint64_t cutoff);
  // inner ∩ ∪_{t in selector} [t!, (t+1)!)
  static IndexSet factorial_filter(IndexSet inner, IndexSet selector);
  static IndexSet set_union(IndexSet a, IndexSet b);
  static IndexSet set_intersect(IndexSet a, IndexSet b);
  static IndexSet set_diff(IndexSet a, IndexSet b);

  bool contains(uint64_t n) const;
  BigInt count(const BigInt& n) const;  // |S ∩ [1, n]|
  uint64_t count_u64(uint64_t n) const;

  // m-th smallest element (1-based). Throws if the set has fewer than m
  // elements or is too sparse to locate within the search bound.
  BigInt rank_enum(uint64_t m) const;

  // Exact asymptotic density when the descriptor reduces to an eventually
  // periodic set modulo a null perturbation; nullopt means "unknown".
  std::optional<Rational> upper_density() const;

  Card cardinality() const;

  // The descriptor tree itself; exposed for serialization and for the
  // structural decision procedures in the ideals module.
  struct Node {
    IndexSetKind kind;
    // ap: a=residue, b=modulus; scaled_odd: a=k; power_multiples: a=b^e,
    // b=exponent, elems[0]=base; powers: a=base; window: a,b=range bounds;
    // tail: a=cutoff.
    uint64_t a = 0;
    uint64_t b = 0;
    std::vector<uint64_t> elems;
    std::shared_ptr<const Node> x, y;  // children; factorial_filter: x=inner, y=selector
  };

  const Node& node() const { return *node_; }
  explicit IndexSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

}  // namespace statlim
