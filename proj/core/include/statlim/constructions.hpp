#pragma once
// Sequence constructions with prescribed limit behaviour, built from the
// dyadic-odd partition of the positive integers, factorial block filters,
// a uniformly distributed unit sequence, and exact interval algebra.

#include "statlim/ideals.hpp"
#include "statlim/index_sets.hpp"
#include "statlim/real_sets.hpp"
#include "statlim/sequences.hpp"
#include "statlim/submeasure.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace statlim {

// --- the base partition -----------------------------------------------------
// squares_part:        C = {j^2}                       density 0
// odd_nonsquares_part: B = odd non-squares             density 1/2
// scaled_part(k):      A_k = {2^k(2j-1)} \ squares     density 2^-(k+1)
IndexSet squares_part();
IndexSet odd_nonsquares_part();
IndexSet scaled_part(uint32_t k);

struct BasePartition {
  std::function<IndexSet(uint32_t)> a;  // A_k, k >= 1
  IndexSet b;
  IndexSet c;
};
BasePartition base_partition();

// A_{k,m}: the factorial-block sub-partition of A_k. For fixed k the family
// {A_{k,m}}_m partitions A_k and every piece has upper density 2^-(k+1),
// realized along factorial checkpoints. The m = 1 selector also absorbs the
// blocks indexed by B and C.
IndexSet factorial_subpartition(uint32_t k, uint32_t m);

// Selector value m(t) for factorial block [t!, (t+1)!).
uint32_t factorial_block_selector(uint64_t t);

// --- scalar building blocks -------------------------------------------------

// The uniformly distributed unit sequence 0; 0,1; 0,1/2,1; 0,1/3,2/3,1; ...
Rational ud_unit(uint64_t t);

// Piecewise-linear inverse CDF of the normalized length measure on F.
// b_n := quantile_transport(F, ud_unit(n)) is uniformly distributed on F.
Rational quantile_transport(const RClosedSet& F, const Rational& u);

// Base-2 digits mapped to doubled base-3 digits; exact on rationals via the
// eventually periodic expansion. Fixes 1 -> 1.
Rational cantor_transport(const Rational& r);
Rational cantor_sequence(uint64_t n);  // cantor_transport(ud_unit(n))

// Enumeration of [0,1] rationals by blocks 0/1,1/1, 0/2,1/2,2/2, ...
// Returns the pair (a_t, b_t); duplicates are preserved.
std::pair<uint64_t, uint64_t> q_enum(uint64_t t);

// C_m = [0,1] minus the open balls of radius 2^-m around q_1..q_m.
RClosedSet c_set(uint64_t m);

// Exact test of C_m ∪ C_{m+1} = [0,1] ∩ ∩_{t<=m} (q_t ± 2^-(m+1))^c.
bool union_step_identity(uint64_t m);

// --- sequence constructions -------------------------------------------------

// Realizes limit-point set A, cluster-point set B, ordinary-limit set C.
// Preconditions (checked, violations name the failing inclusion):
//   every layer of A non-empty and contained in B; B ⊆ C;
//   S := isolated_points(B) ⊆ A; B \ S non-empty and regular closed.
// With A empty (and hence S empty) the two-channel variant is used.
SeqGen assemble_triple(const RFSigma& A, const RClosedSet& B, const RClosedSet& C);

// Realizes limit-point set B only (cluster/ordinary sets are not controlled).
// Indices in the B/C channels are absorbed into the k = 1 family.
SeqGen lambda_only(const RFSigma& B);

// x_n = 1/i on A_i (B, C channels absorbed into i = 1): the limit-point set
// {1/i : i >= 1} is not closed; 0 is a cluster point but not a limit point.
SeqGen nonclosed_demo();

// For an unbounded submeasure ideal: realizes limit = cluster set B and
// ordinary-limit set C, routing dense values of C through the member set I.
// Preconditions: B non-empty, B ⊆ C, I infinite and a member of the ideal.
SeqGen fsigma_pair(const RClosedSet& B, const RClosedSet& C, const IdealSpec& ideal,
                   const IndexSet& I);

// --- the set recursion family ----------------------------------------------

// A family M_1 ⊇ M_2 ⊇ ... with exact submeasure values and exact tail sums,
// used to build a partition {A_n} with positive star norms and vanishing
// union tails.
struct RecursionFamily {
  std::function<IndexSet(uint32_t)> member;     // M_k, k >= 1
  std::function<Rational(uint32_t)> phi_exact;  // phi(M_k), exact
  std::function<Rational(uint32_t)> tail_sum;   // sum_{j >= k} phi(M_j), exact
};

// M_k = multiples of 3^k: phi(M_k) = 3^-k, tails geometric.
RecursionFamily default_recursion_family();

// A_n = M_{n-1} \ M_n (M_0 = everything). Validates, in exact rational
// arithmetic for n = 1..depth: ||M_n|| > sum_{k>n} phi(M_k) > 0, nestedness
// on a sampled prefix, and that every A_n has positive exact density.
std::vector<IndexSet> set_recursion_partition(const RecursionFamily& family, uint32_t depth);

// --- the Fin x Fin example sequence ------------------------------------------

// x_n = dense_enum(C_m, j) where n is the j-th term of the dyadic column P_m.
Rational nofsigma_value(uint64_t n);
SeqGen nofsigma_sequence();

SeqGen cantor_generator();

}  // namespace statlim
