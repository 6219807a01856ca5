#pragma once

// Finite-extension strong minimal cover machinery: A-join compatibility, the
// Omega predicate over oracle-indexed trees T(tau), the enumeration of Pi, the
// pairwise-incompatible selection of extensions, the T'/Theta construction and
// one stage of the driver.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "pi01/thin.hpp"

namespace pi01 {

/// Phi(tau; sigma) = 1 puts sigma in T(tau); sigma is passed as argument string_rank(sigma).
struct OmegaContext {
  FunctionalTable phi;
  std::vector<std::uint64_t> f;  ///< strictly increasing majorant
  BinaryString a_prefix;
};

/// 2^|sigma| - 1 + (sigma read in binary): the length-lex position of sigma.
std::uint64_t string_rank(const BinaryString& sigma);
BinaryString rank_to_string(std::uint64_t rank);

/// e together with every sigma with Phi(tau; sigma) = 1 in at most |tau| steps.
FiniteTree tree_at(const FunctionalTable& phi, const BinaryString& tau);
/// At most two successors per member of T(tau), for every tau of length <= max_len.
Validation validate_context(const OmegaContext& ctx, std::size_t max_len);

bool is_a_oplus_compatible(const BinaryString& tau, const BinaryString& a_prefix);
/// Even-length A-join-compatible strings up to length 2 * depth.
FiniteTree a_oplus_tree(const BinaryString& a_prefix, std::size_t depth);

/// g(n) = greatest length of a level-n member of T(a_prefix), n <= depth.
std::vector<std::uint64_t> level_length_profile(const FunctionalTable& phi, const BinaryString& a_prefix,
                                                std::size_t depth);
/// f(n) = max_{k <= n} g(k) + n.
std::vector<std::uint64_t> majorant_from_g(const std::vector<std::uint64_t>& g);
std::vector<std::uint64_t> compute_majorant(const FunctionalTable& phi, const BinaryString& a_prefix, std::size_t depth);
/// f(n) = max(g(n) + 1, f(n - 1) + 1), the least strictly increasing sequence above g.
std::vector<std::uint64_t> tight_majorant(const FunctionalTable& phi, const BinaryString& a_prefix, std::size_t depth);

/// Omega(tau, n); false whenever some needed f value lies beyond ctx.f.
bool omega(const OmegaContext& ctx, const BinaryString& tau, std::size_t n);
/// Greatest n with Omega(tau, n).
std::size_t omega_level(const OmegaContext& ctx, const BinaryString& tau);
/// Stage s enumerates the qualifying strings of length s; max_stage <= 16.
StagedTree enumerate_pi(const OmegaContext& ctx, std::size_t max_stage);

struct LambdaNode {
  BinaryString tau;
  std::size_t pi_level = 0;
};

struct SelectionStep {
  std::size_t m = 0;
  Rational r;      ///< r_m
  Rational floor;  ///< (1 - r_m) 2^(m+1)
  std::map<std::size_t, std::vector<BinaryString>> pools;  ///< unsettled nodes after step m
};

struct SelectionResult {
  std::size_t n_tau = 0;
  std::vector<std::size_t> n_i;
  std::map<std::size_t, std::pair<BinaryString, BinaryString>> sigma_pairs;
  std::vector<SelectionStep> steps;
};

/// Picks two level-n_{tau_i} extensions of sigma from each T(tau_i), pairwise
/// incompatible, length-lex least at every choice point.
SelectionResult select_extensions(const OmegaContext& ctx, const BinaryString& tau, std::size_t tau_pi_level,
                                  const std::vector<LambdaNode>& lambda, const BinaryString& sigma);
/// r_1..r_M for the given Pi levels relative to tau_pi_level.
std::vector<Rational> lambda_weights(std::size_t tau_pi_level, const std::vector<LambdaNode>& lambda);

struct ThetaAxioms {
  std::map<BinaryString, BinaryString> axioms;  ///< sigma' -> tau_i
  std::map<BinaryString, std::size_t> stage;    ///< stage that enumerated the axiom
};

/// Each stage's axioms have a prefix-free domain, and comparable domain
/// strings map to comparable values in the same order.
Validation check_theta(const ThetaAxioms& theta);
/// Theta values along the prefixes of leaf, shortest first.
std::vector<BinaryString> theta_chain(const ThetaAxioms& theta, const BinaryString& leaf);

struct PiStarStaging {
  StagedTree stages;
  std::map<BinaryString, std::set<BinaryString>> succ_codes;
};

/// Stage-rule and code checks for a Pi* staging against Pi.
Validation validate_pistar(const PiStarStaging& ps, const FiniteTree& pi);

struct TPrimeResult {
  std::map<BinaryString, FiniteTree> tprime;
  ThetaAxioms theta;
};

TPrimeResult build_tprime(const OmegaContext& ctx, const FiniteTree& pi, const PiStarStaging& ps);

/// A Pi* staging that follows a_prefix: each stage gives the current leaf on
/// the path up to max_succ Pi-successors (the one on the path first), keeping r_m <= 1.
PiStarStaging stage_pistar_along(const OmegaContext& ctx, const FiniteTree& pi, std::mt19937_64& rng,
                                 std::size_t max_stages, std::size_t max_succ);

struct SmcScenarioParams {
  std::uint64_t seed = 1;
  std::size_t oracle_len = 5;      ///< axioms are enumerated for oracles up to this length
  std::size_t depth_cap = 10;      ///< T(tau) decides strings up to this length
  unsigned long_edge_permille = 250;
  bool tight = true;               ///< f = g + 1 instead of max g + n
};

/// T(tau) is a hashed 2-branching tree whose edge lengths are 1 or 2, decided
/// up to length min(sum over tau of (1 + bit), depth_cap); choices made below
/// a length depend only on the oracle prefix that first decides that length.
OmegaContext generate_smc_context(const SmcScenarioParams& params);

/// Table whose plain outputs equal the hat outputs of psi on t and on all prefixes of members of t.
FunctionalTable hat_normalize(const FunctionalTable& psi, const FiniteTree& t);

struct DriverState {
  BinaryString b;
  FiniteTree t;
};

enum class DriverBranch { no_splittings, splitting_subtree };
const char* to_string(DriverBranch b);

struct DriverResult {
  DriverState next;
  DriverBranch branch = DriverBranch::no_splittings;
  BinaryString tau;           ///< witness of the no-splitting branch
  FiniteTree splitting_tree;  ///< greedy splitting subtree
  FiniteTree image;           ///< its hat image
  FiniteTree dagger;          ///< subtree of the image supplied by build_tprime
};

/// Subtree of a 2-branching tree t1 built by build_tprime from the context
/// deciding t1 (root shifted to e) along the all-zero oracle.
FiniteTree dagger_subtree(const FiniteTree& t1, std::size_t budget);

DriverResult smc_driver_stage(const DriverState& state, const FunctionalTable& psi, std::size_t dagger_budget,
                              const std::optional<BinaryString>& avoid = std::nullopt);

}  // namespace pi01
