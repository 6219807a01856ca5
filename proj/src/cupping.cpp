#include "pi01/cupping.hpp"

#include <algorithm>

#include "pi01/error.hpp"

namespace pi01 {

namespace {

constexpr std::uint64_t kWidth = 2;  // every Pi* tree is (T,2) compatible

BinaryString big_to_bits(const BigIndex& value, std::size_t width) {
  std::string bits(width, '0');
  for (std::size_t k = 0; k < width; ++k) {
    if (boost::multiprecision::bit_test(value, k)) bits[width - 1 - k] = '1';
  }
  return BinaryString(bits);
}

std::uint64_t tail_value(const BinaryString& s, std::size_t from) {
  std::uint64_t v = 0;
  for (std::size_t k = from; k < s.size(); ++k) v = (v << 1) | static_cast<std::uint64_t>(s[k]);
  return v;
}

// Rank of a sorted w-subset of {0..N-1} among all w-subsets in lex order.
std::uint64_t combination_rank(const std::vector<std::uint64_t>& picks, std::uint64_t n) {
  const auto w = picks.size();
  std::uint64_t rank = 0;
  std::uint64_t start = 0;
  for (std::size_t p = 0; p < w; ++p) {
    for (std::uint64_t x = start; x < picks[p]; ++x) rank += binomial(n - 1 - x, w - 1 - p);
    start = picks[p] + 1;
  }
  return rank;
}

// Index of `child` (level k+1) among the canonical extensions of its level-k truncation.
BigIndex extension_rank(const FiniteTree& child, std::size_t k) {
  const auto base_len = level_length(Shape::graded, k);
  const auto next_len = level_length(Shape::graded, k + 1);
  const std::uint64_t children = std::uint64_t{1} << (next_len - base_len);
  const auto per_leaf = binomial(children, kWidth);
  std::vector<BinaryString> base_leaves;
  for (const auto& s : child) {
    if (s.size() == base_len) base_leaves.push_back(s);
  }
  BigIndex rank = 0;
  for (const auto& leaf : base_leaves) {
    std::vector<std::uint64_t> picks;
    for (const auto& s : child) {
      if (s.size() == next_len && leaf.is_prefix_of(s)) picks.push_back(tail_value(s, base_len));
    }
    std::sort(picks.begin(), picks.end());
    rank = rank * per_leaf + combination_rank(picks, children);
  }
  return rank;
}

}  // namespace

PiStarNode root_node() { return PiStarNode{}; }

void validate_node(const PiStarNode& node) {
  if (!is_compatible_of_level(Shape::graded, node.t_tau, std::vector<std::uint64_t>(node.level, kWidth), node.level)) {
    throw Error(ErrorKind::validation, "T^tau of " + node.tau.token() + " is not (T,2) compatible of level " +
                                           std::to_string(node.level));
  }
  if (node.psi_values.size() != node.level) throw Error(ErrorKind::validation, "wrong number of Psi values");
  for (std::size_t k = 0; k < node.level; ++k) {
    if (node.psi_values[k] >= ncol(k)) throw Error(ErrorKind::validation, "Psi value at " + std::to_string(k) + " >= ncol");
  }
}

BigIndex successor_count(std::size_t level) {
  if (level > 6) throw Error(ErrorKind::resource, "level too deep for successor labels");
  const auto ext = level_length(Shape::graded, level + 1) - level_length(Shape::graded, level);
  BigIndex per_leaf = binomial(std::uint64_t{1} << ext, kWidth);
  BigIndex trees = 1;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << level); ++k) trees *= per_leaf;
  return trees * ncol(level);
}

std::size_t label_width(std::size_t level) {
  BigIndex top = successor_count(level) - 1;
  return top == 0 ? 0 : static_cast<std::size_t>(boost::multiprecision::msb(top)) + 1;
}

std::vector<PiStarNode> pi_star_successors(const PiStarNode& node, std::uint64_t budget) {
  validate_node(node);
  const auto count = successor_count(node.level);
  if (count > budget) {
    throw Error(ErrorKind::resource, "node of level " + std::to_string(node.level) + " has " + count.str() +
                                         " successors, budget " + std::to_string(budget));
  }
  const auto width = label_width(node.level);
  const auto colours = ncol(node.level);
  std::vector<PiStarNode> out;
  std::uint64_t tree_index = 0;
  for_each_extension(Shape::graded, node.t_tau, node.level, kWidth, [&](const FiniteTree& t) {
    for (std::uint64_t c = 0; c < colours; ++c) {
      PiStarNode child;
      child.tau = node.tau + big_to_bits(BigIndex(tree_index) * colours + c, width);
      child.level = node.level + 1;
      child.t_tau = t;
      child.psi_values = node.psi_values;
      child.psi_values.push_back(c);
      out.push_back(std::move(child));
    }
    ++tree_index;
  });
  return out;
}

PiStarNode realize(std::size_t n, const std::vector<std::uint64_t>& f, const FiniteTree& t) {
  if (!is_compatible_of_level(Shape::graded, t, std::vector<std::uint64_t>(n, kWidth), n)) {
    throw Error(ErrorKind::shape, "tree is not (T,2) compatible of level " + std::to_string(n));
  }
  if (f.size() != n) throw Error(ErrorKind::shape, "value vector length differs from the level");
  for (std::size_t k = 0; k < n; ++k) {
    if (f[k] >= ncol(k)) throw Error(ErrorKind::shape, "f(" + std::to_string(k) + ") >= ncol");
  }
  PiStarNode node;
  node.level = n;
  node.t_tau = t;
  node.psi_values = f;
  for (std::size_t k = 0; k < n; ++k) {
    const auto child = truncate_to_level(t, k + 1);
    const BigIndex j = extension_rank(child, k) * ncol(k) + f[k];
    node.tau = node.tau + big_to_bits(j, label_width(k));
  }
  return node;
}

bool stage_filter(const PiStarNode& node, const AdversaryBundle& adv, std::size_t s) {
  if (node.level != s) throw Error(ErrorKind::precondition, "node level differs from the stage");
  const auto limit = std::min(s, adv.psi.size());
  for (const auto& sigma : node.t_tau) {
    for (std::size_t i = 0; i < limit; ++i) {
      auto v = hat_eval(adv.psi[i], sigma, i);
      if (v && *v < ncol(i) && *v == node.psi_values[i]) return false;
    }
  }
  return true;
}

std::vector<PiStarNode> ancestor_chain(const PiStarNode& node) {
  std::vector<PiStarNode> chain;
  for (std::size_t k = 0; k <= node.level; ++k) {
    std::vector<std::uint64_t> f(node.psi_values.begin(), node.psi_values.begin() + static_cast<std::ptrdiff_t>(k));
    chain.push_back(realize(k, f, truncate_to_level(node.t_tau, k)));
  }
  return chain;
}

bool ancestors_pass(const PiStarNode& node, const AdversaryBundle& adv) {
  for (const auto& a : ancestor_chain(node)) {
    if (!stage_filter(a, adv, a.level)) return false;
  }
  return true;
}

Coloring adversary_coloring(const FiniteTree& t, const AdversaryBundle& adv, std::size_t i) {
  Coloring c;
  c.num_colors = static_cast<std::uint32_t>(ncol(i));
  for (const auto& leaf : leaves(t)) {
    std::optional<std::uint32_t> colour;
    if (i < adv.psi.size()) {
      auto v = hat_eval(adv.psi[i], leaf, i);
      if (v && *v < ncol(i)) colour = static_cast<std::uint32_t>(*v);
    }
    c.assignment[leaf] = colour;
  }
  return c;
}

PiStarNode find_pi_member(std::size_t n, const AdversaryBundle& adv) {
  if (n > 3) throw Error(ErrorKind::resource, "find_pi_member is limited to n <= 3");
  FiniteTree t = full_tree(Shape::graded, n);
  std::vector<std::uint64_t> d;
  for (std::size_t i = 0; i < n; ++i) {
    auto e = extract_nice(i, t, adversary_coloring(t, adv, i));
    d.push_back(e.d);
    t = std::move(e.sub);
  }
  auto node = realize(n, d, t);
  if (!ancestors_pass(node, adv)) throw Error(ErrorKind::internal, "witness " + node.tau.token() + " fails the stage filter");
  return node;
}

BinaryString join_code(const FiniteTree& t, const BinaryString& b) {
  const auto roots = members_of_level(t, 0);
  if (roots.size() != 1) throw Error(ErrorKind::precondition, "tree has no unique root");
  BinaryString sigma = roots.front();
  for (std::size_t k = 0; k < b.size(); ++k) {
    auto succ = successors_in(t, sigma);
    if (succ.size() != 2) {
      throw Error(ErrorKind::depth, "walk stops at " + sigma.token() + " after " + std::to_string(k) + " bits");
    }
    sigma = succ[static_cast<std::size_t>(b[k])];
  }
  return sigma;
}

BinaryString join_decode(const FiniteTree& t, const BinaryString& leaf) {
  const auto roots = members_of_level(t, 0);
  if (roots.size() != 1 || !roots.front().is_prefix_of(leaf)) throw Error(ErrorKind::precondition, "endpoint not below the root");
  std::string bits;
  BinaryString sigma = roots.front();
  while (sigma != leaf) {
    auto succ = successors_in(t, sigma);
    if (succ.size() != 2) throw Error(ErrorKind::depth, "endpoint is not reached by a walk");
    if (succ[0].is_prefix_of(leaf)) {
      bits.push_back('0');
      sigma = succ[0];
    } else if (succ[1].is_prefix_of(leaf)) {
      bits.push_back('1');
      sigma = succ[1];
    } else {
      throw Error(ErrorKind::precondition, "endpoint leaves the tree");
    }
  }
  return BinaryString(bits);
}

}  // namespace pi01
