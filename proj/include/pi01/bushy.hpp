#pragma once

// Bushy trees, colourings of their leaves, and the extraction of colour-free
// compatible subtrees.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "pi01/strings.hpp"

namespace pi01 {

/// even: level n is all strings of length 2n (4-branching).
/// graded: level n is all strings of length n(n+3)/2, so level n has 2^{n+2}
/// successors per member.
enum class Shape { even, graded };

const char* to_string(Shape shape);
std::size_t level_length(Shape shape, std::size_t n);
/// All strings of the level-n length; resource error past 24 bits.
std::vector<BinaryString> bushy_level_strings(Shape shape, std::size_t n);
/// Every string of level <= n.
FiniteTree full_tree(Shape shape, std::size_t n);

std::uint64_t ncol(std::size_t i);
/// Closed form: 2 below i, 2^{n-i+2} from i on.
std::uint64_t kappa(std::size_t i, std::size_t n);
/// The defining recurrence, evaluated step by step.
std::uint64_t kappa_recurrence(std::size_t i, std::size_t n);
std::vector<std::uint64_t> kappa_schedule(std::size_t i, std::size_t levels);

/// Leaf colours; an absent value marks a leaf the adversary never coloured,
/// which never matches any colour.
struct Coloring {
  std::map<BinaryString, std::optional<std::uint32_t>> assignment;
  std::uint32_t num_colors = 2;
};

struct Extraction {
  std::uint32_t d = 0;
  FiniteTree sub;
};

/// Non-empty, levels land on the shape's lengths, and every non-leaf of
/// level k has exactly f[k] successors.
bool is_compatible(Shape shape, const FiniteTree& sub, const std::vector<std::uint64_t>& f);
/// Compatible and every leaf sits at level n.
bool is_compatible_of_level(Shape shape, const FiniteTree& sub, const std::vector<std::uint64_t>& f,
                            std::size_t n);

Extraction extract_twocol(std::size_t n, const Coloring& c);
Extraction extract_nice(std::size_t i, const FiniteTree& t0, const Coloring& c);

/// Independent check for both extractions; `source`, when given, must contain sub.
Validation verify_extraction(Shape shape, const std::vector<std::uint64_t>& f_target, std::size_t n,
                             const Coloring& c, std::uint32_t d, const FiniteTree& sub,
                             const FiniteTree* source = nullptr);

/// A uniformly random compatible tree of level n: each non-leaf keeps f[k]
/// of its shape successors.
FiniteTree random_compatible(Shape shape, const std::vector<std::uint64_t>& f, std::size_t n, std::mt19937_64& rng);

/// Calls visit on every compatible tree of level n extending `base` (a
/// compatible tree of level n-1, or {λ} for n = 0). The order is canonical:
/// mixed radix over base leaves in length-lex order, first leaf most
/// significant; per leaf, f[n-1]-subsets of its children in lex order.
void for_each_extension(Shape shape, const FiniteTree& base, std::size_t base_level, std::uint64_t width,
                        const std::function<void(const FiniteTree&)>& visit);
/// Number of such extensions: C(children, width)^{#leaves}.
std::uint64_t extension_count(Shape shape, std::size_t base_level, std::size_t leaf_count, std::uint64_t width);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Uniform random colouring of the leaves of t.
Coloring random_coloring(const FiniteTree& t, std::uint32_t num_colors, std::mt19937_64& rng);

}  // namespace pi01
