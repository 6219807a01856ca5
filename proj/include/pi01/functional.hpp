#pragma once

// Partial Turing functionals as finite axiom tables.
//
// An axiom (sigma, arg, value, steps) says the functional, given any oracle
// string extending sigma, outputs `value` on `arg` after `steps` steps.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pi01/strings.hpp"

namespace pi01 {

struct Axiom {
  BinaryString sigma;
  std::uint64_t arg = 0;
  std::uint64_t value = 0;
  std::uint64_t steps = 1;

  friend bool operator==(const Axiom&, const Axiom&) = default;
};

/// The applicable axiom chosen for a query: fewest steps, then shortest sigma.
struct Convergence {
  std::uint64_t value = 0;
  std::uint64_t steps = 0;
  std::size_t use = 0;  ///< length of the sigma that fired
};

class FunctionalTable {
 public:
  FunctionalTable() = default;
  /// Throws Error(consistency) naming the first clashing pair.
  explicit FunctionalTable(std::vector<Axiom> axioms);

  void add(const Axiom& axiom);
  /// Adds the axiom unless it clashes with the table; returns whether it was added.
  bool try_add(const Axiom& axiom);

  const std::vector<Axiom>& axioms() const noexcept { return axioms_; }
  bool empty() const noexcept { return axioms_.empty(); }
  std::size_t size() const noexcept { return axioms_.size(); }
  std::optional<std::uint64_t> max_arg() const;

  /// Use-principle lookup restricted to axioms with steps <= max_steps.
  std::optional<Convergence> lookup(const BinaryString& tau, std::uint64_t n,
                                    std::uint64_t max_steps = UINT64_MAX) const;

 private:
  std::optional<std::size_t> clash_with(const Axiom& axiom) const;

  std::vector<Axiom> axioms_;
  std::map<std::uint64_t, std::vector<std::size_t>> by_arg_;
  std::map<std::pair<BinaryString, std::uint64_t>, std::size_t> by_key_;
};

/// Which output notion a splitting predicate compares.
enum class Outputs { plain, hat };

std::optional<std::uint64_t> eval(const FunctionalTable& f, const BinaryString& tau, std::uint64_t n);
std::optional<std::uint64_t> eval_within(const FunctionalTable& f, const BinaryString& tau,
                                         std::uint64_t n, std::uint64_t max_steps);
/// Psi(tau): values on arguments 0, 1, ... up to the first undefined one.
std::vector<std::uint64_t> output(const FunctionalTable& f, const BinaryString& tau);
/// hat-Psi(tau): the maximal defined initial sequence of the step-bounded restriction.
std::vector<std::uint64_t> hat_output(const FunctionalTable& f, const BinaryString& tau);
std::optional<std::uint64_t> hat_eval(const FunctionalTable& f, const BinaryString& tau, std::uint64_t n);
std::vector<std::uint64_t> outputs(const FunctionalTable& f, const BinaryString& tau, Outputs which);

/// Values up to (not including) the first one that is not a bit.
BinaryString bit_prefix(const std::vector<std::uint64_t>& values);

bool outputs_incompatible(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);
bool is_splitting_pair(const FunctionalTable& f, const BinaryString& a, const BinaryString& b,
                       Outputs which = Outputs::plain);
bool is_splitting_tree(const FunctionalTable& f, const FiniteTree& t, bool delayed,
                       Outputs which = Outputs::plain);
/// First non-splitting incompatible pair, if any.
std::optional<std::pair<BinaryString, BinaryString>> splitting_violation(
    const FunctionalTable& f, const FiniteTree& t, bool delayed, Outputs which = Outputs::plain);

struct WeakSplitWitness {
  FiniteTree tree;
  std::map<BinaryString, std::uint64_t> phi;
  std::map<BinaryString, std::uint64_t> psi;
  std::vector<BinaryString> order;  ///< enumeration order
};

/// Enumerates the weakly splitting tree for a pair with Phi(Psi(A)) = A,
/// scanning every string of length <= length_budget in length-lex order.
WeakSplitWitness build_weak_splitting_tree(const FunctionalTable& psi, const FunctionalTable& phi,
                                           std::size_t length_budget);
Validation check_weak_splitting(const WeakSplitWitness& w, const FunctionalTable& psi,
                                const BinaryString& path_prefix);
std::optional<BinaryString> decode_initial_segment(const WeakSplitWitness& w, const FunctionalTable& psi,
                                                   const BinaryString& oracle_prefix, std::size_t n);

/// True iff plain and hat outputs coincide on every member.
bool is_own_hat_restriction(const FunctionalTable& f, const FiniteTree& t);
FiniteTree image_tree(const FunctionalTable& f, const FiniteTree& t);
FiniteTree pullback_tree(const FunctionalTable& f, const FiniteTree& t0, const FiniteTree& t2);

}  // namespace pi01
