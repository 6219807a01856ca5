#pragma once

// The class used for the cupping property: the recursively defined tree of
// candidate strings, each carrying a compatible bushy tree and colour values,
// the stage filter against adversary functionals, and the witness search.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pi01/bushy.hpp"
#include "pi01/functional.hpp"

namespace pi01 {

using BigIndex = boost::multiprecision::cpp_int;

struct PiStarNode {
  BinaryString tau;
  std::size_t level = 0;
  FiniteTree t_tau{BinaryString{}};
  std::vector<std::uint64_t> psi_values;

  friend bool operator==(const PiStarNode&, const PiStarNode&) = default;
};

struct AdversaryBundle {
  std::vector<FunctionalTable> psi;
};

PiStarNode root_node();
/// Throws Error(validation) unless the tree is (T,2) compatible of the node's
/// level and every value is below ncol.
void validate_node(const PiStarNode& node);

/// Number of successors: (#compatible extension trees) * ncol(level).
BigIndex successor_count(std::size_t level);
/// Width in bits of the successor labels below a node of this level.
std::size_t label_width(std::size_t level);

/// Successors in label order; resource error when there are more than
/// `budget` of them.
std::vector<PiStarNode> pi_star_successors(const PiStarNode& node, std::uint64_t budget = 100000);
PiStarNode realize(std::size_t n, const std::vector<std::uint64_t>& f, const FiniteTree& t);

bool stage_filter(const PiStarNode& node, const AdversaryBundle& adv, std::size_t s);
/// The node's ancestors (root first, node last).
std::vector<PiStarNode> ancestor_chain(const PiStarNode& node);
/// Every node of the chain passes the filter at the stage equal to its level.
bool ancestors_pass(const PiStarNode& node, const AdversaryBundle& adv);

/// The colouring of t's leaves induced by hat-Psi_i(sigma; i); values of
/// ncol(i) or more count as divergent.
Coloring adversary_coloring(const FiniteTree& t, const AdversaryBundle& adv, std::size_t i);
PiStarNode find_pi_member(std::size_t n, const AdversaryBundle& adv);

/// Walks the 2-branching tree t from its root, taking the larger successor
/// on bit 1 and the smaller on bit 0.
BinaryString join_code(const FiniteTree& t, const BinaryString& b);
/// Recovers b from the endpoint of a walk.
BinaryString join_decode(const FiniteTree& t, const BinaryString& leaf);

}  // namespace pi01
