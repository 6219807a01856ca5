#pragma once

// Corpus and sweep kernels. Every item draws its randomness from
// item_seed(seed, index), so serial and OpenMP runs give identical results.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pi01/bushy.hpp"
#include "pi01/cupping.hpp"
#include "pi01/smc.hpp"
#include "pi01/thin.hpp"
#include "pi01/traceable.hpp"

namespace pi01 {

enum class Exec { serial, parallel };

struct ItemResult {
  bool ok = true;
  std::string witness;
  friend bool operator==(const ItemResult&, const ItemResult&) = default;
};

struct SweepResult {
  std::string id;
  std::vector<ItemResult> items;

  std::size_t passed() const;
  bool ok() const { return passed() == items.size(); }
  std::optional<std::size_t> first_failure() const;
  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

std::uint64_t item_seed(std::uint64_t seed, std::uint64_t index);

/// Runs fn(0..count-1); an Error thrown by an item becomes a failed item.
SweepResult run_indexed(const std::string& id, std::size_t count, Exec exec,
                        const std::function<ItemResult(std::size_t)>& fn);

/// Colouring of the even-shape level-n strings given by the bits of index.
Coloring twocol_coloring(std::size_t n, std::uint64_t index);
/// All 2^(4^n) colourings; n <= 2.
SweepResult sweep_twocol_exhaustive(std::size_t n, Exec exec);
SweepResult sweep_twocol_sampled(std::size_t n, std::size_t count, std::uint64_t seed, Exec exec);
/// Random (T, kappa_i)-compatible sources, ncol(i) colours, every third item with uncoloured leaves.
SweepResult sweep_nice_sampled(std::size_t i, std::size_t n, std::size_t count, std::uint64_t seed, Exec exec);
/// kappa(i, n) against 2^(n-i+2) and the recurrence.
SweepResult sweep_kappa(std::size_t max_i, std::size_t max_n);

/// Item 0 empty; items 1 mod 3 crafted blockers; the rest random with up to 200 axioms.
std::vector<AdversaryBundle> adversary_corpus(std::uint64_t seed, std::size_t count);
AdversaryBundle random_traceable_bundle(std::mt19937_64& rng);
/// find_pi_member for n <= max_n, the filter along the chain, and membership in the
/// exhaustively filtered level-1 successors.
SweepResult sweep_pi_members(const std::vector<AdversaryBundle>& corpus, std::size_t max_n, Exec exec);
/// Frontier, counting bounds, trace bounds and final-node properties over seeded runs.
SweepResult sweep_traceable(std::size_t runs, std::size_t horizon, std::uint64_t seed, Exec exec);

/// Thin subsets of hat level trees give traces of size <= 2^(n+1).
SweepResult sweep_trace_from_thin(std::size_t count, std::uint64_t seed, Exec exec);
/// Traces of size <= n over random weak trees give thin subsets.
SweepResult sweep_thin_from_trace(std::size_t count, std::uint64_t seed, Exec exec);
/// Rescaled traces have size <= n.
SweepResult sweep_rescale(std::size_t count, std::uint64_t seed, Exec exec);
SweepResult sweep_selfdelim(std::uint64_t max_n, std::uint64_t max_m);
/// Greedy splitting subsets are thin; a broken split is reported with its pair.
SweepResult sweep_splittree(std::size_t count, std::uint64_t seed, Exec exec);

/// Random 2-branching tree with edge lengths 2..3 and a functional whose hat
/// outputs read the branch bits.
std::pair<FiniteTree, FunctionalTable> random_splitting_instance(std::mt19937_64& rng, std::size_t depth);
/// pullback(image(t0)) = t0 and the image is 2-branching.
SweepResult sweep_trelem1(std::size_t count, std::uint64_t seed, Exec exec);

/// Generated context plus a random prefix-free thin set of nodes above e, relative levels 1..3.
struct SelectionInstance {
  OmegaContext ctx;
  std::vector<LambdaNode> lambda;
};
SelectionInstance random_selection_instance(std::uint64_t seed);
/// Two nodes of relative level 1.
SelectionInstance two_node_instance();
/// Checks for a selection at base e (Pi levels relative to e): levels, all-pairs incompatibility, r_m and floors.
Validation verify_selection(const OmegaContext& ctx, const std::vector<LambdaNode>& lambda, const BinaryString& sigma,
                            const SelectionResult& res);
SweepResult sweep_selection(std::size_t count, std::uint64_t seed, Exec exec);
/// Theta decoding of every T' leaf reproduces the Pi* path.
SweepResult sweep_theta(std::size_t count, std::uint64_t seed, Exec exec);

}  // namespace pi01
