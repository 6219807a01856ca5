#pragma once

// Thin subsets of trees (level-weighted Kraft bound on antichains) and the
// conversions between thin subtrees, bounded traces and self-delimiting codes.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "pi01/functional.hpp"

namespace pi01 {

using Rational = boost::multiprecision::cpp_rational;

/// Bounded trace: |w[n]| <= p[n] wherever both are present.
struct TraceSystem {
  std::vector<std::uint64_t> p;
  std::map<std::size_t, std::set<std::uint64_t>> w;

  friend bool operator==(const TraceSystem&, const TraceSystem&) = default;
};

Validation check_trace_sizes(const TraceSystem& ts);
/// Arguments n < |f| with f[n] in w[n].
std::vector<std::size_t> caught_arguments(const TraceSystem& ts, const std::vector<std::uint64_t>& f);

/// Sum over lambda_set of 2^-(level of the member in the cone of t above tau).
Rational kraft_weight(const FiniteTree& t, const BinaryString& tau, const std::vector<BinaryString>& lambda_set);

struct ThinViolation {
  BinaryString tau;
  std::vector<BinaryString> antichain;
  Rational weight;
};

/// The heaviest antichain above the first member of tp whose bound exceeds 1;
/// an empty antichain with tau = e when e is missing from tp.
std::optional<ThinViolation> thin_violation(const FiniteTree& t, const FiniteTree& tp);
bool is_thin(const FiniteTree& t, const FiniteTree& tp);

/// e together with every tau (|tau| <= max_len) whose hat output is strictly
/// longer than that of its parent; such a tau has level |hat-Psi(tau)|.
FiniteTree hat_level_tree(const FunctionalTable& psi, std::size_t max_len);
/// w[n] = hat values at n of the level n+1 members of tp; p[n] = 2^(n+1).
TraceSystem trace_from_thin(const FunctionalTable& psi, const FiniteTree& level_tree, const FiniteTree& tp);

/// Interleaves the binary digits of n with 0 markers and ends with a 1 marker.
BinaryString selfdelim_prefix(std::uint64_t n);
BinaryString selfdelim_encode(std::uint64_t n, std::uint64_t m);
std::pair<std::uint64_t, std::uint64_t> selfdelim_decode(const BinaryString& code);

/// Natural-number code of a tuple: binary "1" followed by selfdelim_prefix(v + 1) per value.
std::uint64_t tuple_code(const std::vector<std::uint64_t>& values);
std::optional<std::vector<std::uint64_t>> tuple_decode(std::uint64_t code);
/// Natural-number code of a string: the number written "1" sigma in binary.
std::uint64_t string_code(const BinaryString& sigma);
std::optional<BinaryString> string_decode(std::uint64_t code);

/// p with p(0) = 0 and strictly increasing; a non-strict step adds n to every term.
std::vector<std::uint64_t> normalize_bound(const std::vector<std::uint64_t>& p);
/// Greatest m with p(m) <= n, when the sequence is long enough to tell.
std::optional<std::size_t> k_of(const std::vector<std::uint64_t>& p, std::size_t n);
/// Least m with k(m) > n, when the sequence is long enough to tell.
std::optional<std::size_t> kprime_of(const std::vector<std::uint64_t>& p, std::size_t n);
/// f'(m) = tuple_code(f restricted to k'(m)) for every m where that is determined by f and p.
std::vector<std::uint64_t> lift_function(const std::vector<std::uint64_t>& f, const std::vector<std::uint64_t>& p);
/// Trace with |w'[n]| <= n from a trace of the lifted function with bound p.
TraceSystem rescale_trace(const TraceSystem& ts);

/// Level n of the spaced tree is level n(n+1) of t.
std::size_t spaced_level(std::size_t n);
/// e together with the strings coded in w; each code must name a member of t at spaced level n.
FiniteTree thin_from_trace(const StagedTree& t, const TraceSystem& ts);
/// Sum over 1 <= i <= terms of (n+i) 2^(-2(n+i)).
Rational spaced_bound_partial_sum(std::size_t n, std::size_t terms);

/// w[n] = {Psi_n(e; n)} where defined, else empty; p[n] = 1.
TraceSystem dnr_trace(const std::vector<FunctionalTable>& adv);

struct SplitThinResult {
  FunctionalTable psi;
  bool thin_ok = false;
  std::optional<std::pair<BinaryString, BinaryString>> witness;  ///< non-splitting pair
  std::optional<ThinViolation> violation;
};

/// Psi(tau) = tau restricted to its level, for every member of the final stage.
FunctionalTable level_prefix_functional(const FiniteTree& t);
SplitThinResult splitting_to_thin(const StagedTree& t, const FiniteTree& split_sub);

struct BoundedTrace {
  TraceSystem trace;                        ///< p[n] = m^(n+1)
  std::vector<std::uint64_t> level_n_bound;  ///< m^n, the count of level-n members
};

/// w[n] = defined hat values at n over the level n+1 members of t.
BoundedTrace trace_from_bounded_splitting(const FunctionalTable& psi, const FiniteTree& t, std::uint64_t m);
/// Greatest defined hat value at n over the level n+1 members of a tree
/// that is perfect and hat-splitting up to level n+1.
std::uint64_t majorizer_from_perfect(const FunctionalTable& psi, const FiniteTree& t, std::size_t n);

/// Random weak c.e. tree: one new leaf (or nothing) per stage, strings of length <= max_len.
StagedTree random_weak_tree(std::mt19937_64& rng, std::size_t max_len, std::size_t stages);

}  // namespace pi01
