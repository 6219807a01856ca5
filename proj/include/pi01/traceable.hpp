#pragma once

// Stage construction of a downward closed tree whose paths are incomputable
// and c.e. traceable: C modules bound the values of each adversary functional
// below a node, P modules prune a branch computed outright by an adversary.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "pi01/cupping.hpp"

namespace pi01 {

struct ModuleId {
  enum class Kind { C, P };
  Kind kind = Kind::C;
  std::size_t i = 0;
  std::size_t n = 0;  ///< unused for P modules

  static ModuleId c(std::size_t i, std::size_t n) { return {Kind::C, i, n}; }
  static ModuleId p(std::size_t i) { return {Kind::P, i, 0}; }
  std::string label() const;

  friend auto operator<=>(const ModuleId&, const ModuleId&) = default;
};

struct NodeInfo {
  std::size_t level = 0;
  std::vector<ModuleId> modules;  ///< run order: C by (i, n), then P
  std::uint64_t generation = 0;
  std::size_t declared_stage = 0;

  friend bool operator==(const NodeInfo&, const NodeInfo&) = default;
};

/// (i, n, d): the value d may be Psi_i(A; n).
using TraceTuple = std::tuple<std::size_t, std::size_t, std::uint64_t>;

struct TupleRecord {
  BinaryString node;
  std::uint64_t generation = 0;
  std::size_t node_level = 0;
  TraceTuple tuple;

  friend bool operator==(const TupleRecord&, const TupleRecord&) = default;
};

struct ConstructionState {
  std::size_t stage = 0;  ///< stages completed
  FiniteTree pi;
  std::map<BinaryString, NodeInfo> nodes;
  std::set<BinaryString> terminal;  ///< roots of terminal cones
  std::set<TraceTuple> tuples;
  std::set<std::tuple<BinaryString, ModuleId, std::uint64_t>> acted;
  std::vector<TupleRecord> tuple_log;
  std::map<std::size_t, std::uint64_t> declared_per_level;  ///< node generations ever declared
  std::uint64_t next_generation = 0;
  std::uint64_t actions = 0;

  friend bool operator==(const ConstructionState&, const ConstructionState&) = default;
};

using TraceReport = std::map<std::size_t, std::map<std::size_t, std::set<std::uint64_t>>>;

/// Modules of a level-n node: C(n', n-n') for n' <= n, then P(n).
std::vector<ModuleId> modules_for_level(std::size_t n);

ConstructionState init_state();
bool is_terminal(const ConstructionState& st, const BinaryString& s);
/// Non-terminal strings of length `len` (all of them lie in pi when len <= stage).
std::vector<BinaryString> frontier(const ConstructionState& st, std::size_t len);
std::vector<BinaryString> successor_nodes(const ConstructionState& st, const BinaryString& tau);

/// The adversary's output at the empty oracle using computations of at most
/// max_steps steps, cut at the first non-bit value.
BinaryString empty_oracle_output(const FunctionalTable& f, std::uint64_t max_steps);

/// Each acts during stage st.stage + 1; protocol error when the module is not
/// allocated to a current node or has already acted for this node generation.
std::optional<ConstructionState> act_c_module(const ConstructionState& st, const BinaryString& tau, const ModuleId& m,
                                              const AdversaryBundle& adv);
std::optional<ConstructionState> act_p_module(const ConstructionState& st, const BinaryString& tau, const ModuleId& m,
                                              const AdversaryBundle& adv);

ConstructionState run_stage(const ConstructionState& st, const AdversaryBundle& adv);
ConstructionState run_to(const ConstructionState& st, const AdversaryBundle& adv, std::size_t horizon);

TraceReport extract_trace(const ConstructionState& st);
/// No module acts during the next two stages.
bool is_quiescent(const ConstructionState& st, const AdversaryBundle& adv);
/// The three final-node properties, for nodes shorter than the current stage.
Validation verify_final_nodes(const ConstructionState& st, const AdversaryBundle& adv);

/// 2^n (n+1)!: bound on node generations of level n.
std::uint64_t node_bound(std::size_t n);
/// 2^{n+i} (n+i+1)!: bound on |trace[i][n]| claimed in the verification.
std::uint64_t trace_bound(std::size_t i, std::size_t n);
/// 2^{n+i} (n+i)!: the dominated family used to define p.
std::uint64_t p_family(std::size_t i, std::size_t n);

}  // namespace pi01
