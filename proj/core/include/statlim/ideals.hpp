#pragma once
// Ideal specifications on the positive integers with decidable-where-possible
// membership. "undecided" is a first-class outcome: estimation never stands
// in for a symbolic answer.

#include "statlim/index_sets.hpp"
#include "statlim/submeasure.hpp"

#include <cstdint>
#include <optional>

namespace statlim {

enum class Tristate { yes, no, undecided };

enum class IdealKind {
  fin,            // finite sets
  analytic_p,     // {A : ||A||_phi = 0}, phi bounded
  fsigma,         // {A : phi(A) < infinity}, phi unbounded
  fin_times_fin,  // finitely many infinite columns under the dyadic partition
};

class IdealSpec {
 public:
  static IdealSpec fin();
  static IdealSpec analytic_p(Submeasure phi);  // requires phi bounded
  static IdealSpec fsigma(Submeasure phi);      // requires phi unbounded
  static IdealSpec fin_times_fin();             // dyadic-odd column partition

  IdealKind kind() const { return kind_; }
  const Submeasure& phi() const;

 private:
  IdealSpec(IdealKind k, std::optional<Submeasure> phi) : kind_(k), phi_(phi) {}
  IdealKind kind_;
  std::optional<Submeasure> phi_;
};

// The fixed column partition used by fin_times_fin: P_m = {2^(m-1)(2j-1)},
// the numbers with 2-adic valuation exactly m-1. m is 1-based.
IndexSet default_column(uint32_t m);

Tristate is_member(const IdealSpec& ideal, const IndexSet& s);

}  // namespace statlim
