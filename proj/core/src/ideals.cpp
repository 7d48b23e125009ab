#include "statlim/ideals.hpp"

namespace statlim {

IdealSpec IdealSpec::fin() { return IdealSpec(IdealKind::fin, std::nullopt); }

IdealSpec IdealSpec::analytic_p(Submeasure phi) {
  if (!phi.bounded()) {
    throw precondition_error("analytic_p: requires a bounded submeasure");
  }
  return IdealSpec(IdealKind::analytic_p, phi);
}

IdealSpec IdealSpec::fsigma(Submeasure phi) {
  if (phi.bounded()) {
    throw precondition_error("fsigma: requires an unbounded submeasure");
  }
  return IdealSpec(IdealKind::fsigma, phi);
}

IdealSpec IdealSpec::fin_times_fin() { return IdealSpec(IdealKind::fin_times_fin, std::nullopt); }

const Submeasure& IdealSpec::phi() const {
  if (!phi_) throw precondition_error("ideal: no submeasure attached");
  return *phi_;
}

IndexSet default_column(uint32_t m) {
  if (m == 0) throw precondition_error("default_column: m is 1-based");
  return IndexSet::scaled_odd(m - 1);
}

namespace {

Tristate from_card(Card c) {
  switch (c) {
    case Card::finite:
      return Tristate::yes;
    case Card::infinite:
      return Tristate::no;
    default:
      return Tristate::undecided;
  }
}

// Decides whether {m : s ∩ P_m infinite} is finite for the dyadic columns
// P_m = {v2(n) = m-1}. Sound structural rules; undecided otherwise.
Tristate decide_columns(const IndexSet::Node& n) {
  using K = IndexSetKind;
  switch (n.kind) {
    case K::empty:
    case K::finite_list:
    case K::window:
      return Tristate::yes;  // finite sets meet no column infinitely
    case K::all:
      return Tristate::no;
    case K::ap: {
      // Members of {n ≡ r (mod m)} have 2-adic valuation pinned to v2(r) when
      // r does not vanish mod the 2-part of m (single column); otherwise every
      // sufficiently high valuation occurs (infinitely many columns).
      uint64_t two_part = n.b & ~(n.b - 1);
      return (n.a % two_part) != 0 ? Tristate::yes : Tristate::no;
    }
    case K::scaled_odd:
      return Tristate::yes;  // exactly one column
    case K::squares:
      return Tristate::no;  // squares hit every even valuation
    case K::power_multiples:
      return Tristate::no;  // multiples contain all high valuations
    case K::powers:
      // b odd: one column; b even: at most one element per column.
      return Tristate::yes;
    case K::tail:
      return decide_columns(*n.x);
    case K::union_: {
      Tristate a = decide_columns(*n.x);
      Tristate b = decide_columns(*n.y);
      if (a == Tristate::no || b == Tristate::no) return Tristate::no;
      if (a == Tristate::yes && b == Tristate::yes) return Tristate::yes;
      return Tristate::undecided;
    }
    case K::intersect: {
      Tristate a = decide_columns(*n.x);
      Tristate b = decide_columns(*n.y);
      if (a == Tristate::yes || b == Tristate::yes) return Tristate::yes;  // subset of a member
      return Tristate::undecided;
    }
    case K::diff: {
      Tristate a = decide_columns(*n.x);
      Tristate b = decide_columns(*n.y);
      if (a == Tristate::yes) return Tristate::yes;
      // Infinitely many infinite a-columns minus finitely many infinite
      // b-columns still leaves infinitely many.
      if (a == Tristate::no && b == Tristate::yes) return Tristate::no;
      return Tristate::undecided;
    }
    case K::factorial_filter: {
      Tristate inner = decide_columns(*n.x);
      if (inner == Tristate::yes) return Tristate::yes;  // subset of inner
      return Tristate::undecided;
    }
  }
  return Tristate::undecided;
}

}  // namespace

Tristate is_member(const IdealSpec& ideal, const IndexSet& s) {
  switch (ideal.kind()) {
    case IdealKind::fin:
      return from_card(s.cardinality());
    case IdealKind::analytic_p: {
      // Density: membership is exactly "upper density zero".
      if (auto d = s.upper_density()) {
        return *d == 0 ? Tristate::yes : Tristate::no;
      }
      return Tristate::undecided;
    }
    case IdealKind::fsigma: {
      StarNormEstimate e = star_norm(ideal.phi(), s, StarNormOptions{4096});
      if (e.mode == EstimateMode::exact) {
        // Unbounded phi: the star norm is infinite iff phi(s) is infinite.
        return e.infinite ? Tristate::no : Tristate::yes;
      }
      return Tristate::undecided;
    }
    case IdealKind::fin_times_fin:
      return decide_columns(s.node());
  }
  return Tristate::undecided;
}

}  // namespace statlim
