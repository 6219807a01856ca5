#include "pi01/bushy.hpp"

#include <algorithm>
#include <numeric>

#include "pi01/error.hpp"

namespace pi01 {

namespace {

constexpr std::size_t kMaxLevelBits = 24;

// Members of t grouped by level, with successor lists, for trees whose
// members all sit on the shape's level lengths.
struct Layers {
  std::vector<std::vector<BinaryString>> levels;
  std::map<BinaryString, std::vector<BinaryString>> children;
};

Layers layer(Shape shape, const FiniteTree& t, std::size_t n) {
  Layers out;
  out.levels.resize(n + 1);
  for (const auto& s : t) {
    bool placed = false;
    for (std::size_t k = 0; k <= n; ++k) {
      if (s.size() == level_length(shape, k)) {
        out.levels[k].push_back(s);
        if (k > 0) out.children[s.prefix(level_length(shape, k - 1))].push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) throw Error(ErrorKind::shape, s.token() + " is not on a level of the shape");
  }
  return out;
}

constexpr int kUncolored = -1;

// Propagates majority colours from level n down to `base`, picks the least
// colour unused at `base`, then unwinds choosing f[k] non-d successors.
Extraction extract_core(Shape shape, const FiniteTree& t0, std::size_t n, const Coloring& c, std::size_t base,
                        const std::vector<std::uint64_t>& f_target) {
  const auto layers = layer(shape, t0, n);
  std::map<BinaryString, int> col;
  for (const auto& [s, v] : c.assignment) col[s] = v ? static_cast<int>(*v) : kUncolored;

  for (std::size_t k = n; k-- > base;) {
    for (const auto& s : layers.levels[k]) {
      const auto& kids = layers.children.at(s);
      std::map<int, std::size_t> counts;
      for (const auto& kid : kids) ++counts[col.at(kid)];
      int chosen = 0;
      for (const auto& [colour, count] : counts) {
        if (2 * count > kids.size()) chosen = colour;
      }
      col[s] = chosen;
    }
  }

  std::vector<bool> used(c.num_colors, false);
  for (const auto& s : layers.levels[base]) {
    auto v = col.at(s);
    if (v >= 0 && static_cast<std::uint32_t>(v) < c.num_colors) used[v] = true;
  }
  auto free_colour = std::find(used.begin(), used.end(), false);
  if (free_colour == used.end()) throw Error(ErrorKind::internal, "every colour is used at the base level");

  Extraction out;
  out.d = static_cast<std::uint32_t>(free_colour - used.begin());
  const int d = static_cast<int>(out.d);
  for (std::size_t k = 0; k <= base; ++k) {
    for (const auto& s : layers.levels[k]) out.sub.insert(s);
  }
  std::vector<BinaryString> frontier = layers.levels[base];
  for (std::size_t k = base; k < n; ++k) {
    std::vector<BinaryString> next;
    for (const auto& s : frontier) {
      std::uint64_t taken = 0;
      for (const auto& kid : layers.children.at(s)) {
        if (taken == f_target[k]) break;
        if (col.at(kid) == d) continue;
        out.sub.insert(kid);
        next.push_back(kid);
        ++taken;
      }
      if (taken < f_target[k]) {
        throw Error(ErrorKind::internal, "only " + std::to_string(taken) + " successors of " + s.token() +
                                             " avoid colour " + std::to_string(d));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

void check_colouring_domain(const Coloring& c, const std::vector<BinaryString>& expected, ErrorKind kind) {
  if (c.assignment.size() != expected.size()) {
    throw Error(kind, "colouring has " + std::to_string(c.assignment.size()) + " entries, expected " +
                          std::to_string(expected.size()));
  }
  for (const auto& s : expected) {
    auto it = c.assignment.find(s);
    if (it == c.assignment.end()) throw Error(kind, "leaf " + s.token() + " is not coloured");
    if (it->second && *it->second >= c.num_colors) {
      throw Error(kind, "colour of " + s.token() + " is out of range");
    }
  }
}

}  // namespace

const char* to_string(Shape shape) { return shape == Shape::even ? "even" : "graded"; }

std::size_t level_length(Shape shape, std::size_t n) {
  return shape == Shape::even ? 2 * n : n * (n + 3) / 2;
}

std::vector<BinaryString> bushy_level_strings(Shape shape, std::size_t n) {
  const auto len = level_length(shape, n);
  if (len > kMaxLevelBits) throw Error(ErrorKind::resource, "level " + std::to_string(n) + " needs 2^" + std::to_string(len) + " strings");
  return strings_of_length(len);
}

FiniteTree full_tree(Shape shape, std::size_t n) {
  FiniteTree t;
  for (std::size_t k = 0; k <= n; ++k) {
    for (auto& s : bushy_level_strings(shape, k)) t.insert(s);
  }
  return t;
}

std::uint64_t ncol(std::size_t i) {
  if (i > 62) throw Error(ErrorKind::resource, "ncol overflows 64 bits");
  return std::uint64_t{1} << (i + 1);
}

std::uint64_t kappa(std::size_t i, std::size_t n) {
  if (n < i) return 2;
  if (n - i + 2 > 63) throw Error(ErrorKind::resource, "kappa overflows 64 bits");
  return std::uint64_t{1} << (n - i + 2);
}

std::uint64_t kappa_recurrence(std::size_t i, std::size_t n) {
  std::uint64_t v = i == 0 ? 4 : 2;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k >= i) {
      if (v > (UINT64_MAX >> 1)) throw Error(ErrorKind::resource, "kappa overflows 64 bits");
      v *= 2;
    } else {
      v = 2;
    }
  }
  return v;
}

std::vector<std::uint64_t> kappa_schedule(std::size_t i, std::size_t levels) {
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k < levels; ++k) out.push_back(kappa(i, k));
  return out;
}

bool is_compatible(Shape shape, const FiniteTree& sub, const std::vector<std::uint64_t>& f) {
  if (sub.empty()) return false;
  std::map<BinaryString, std::size_t> level;
  std::map<BinaryString, std::uint64_t> succ;
  for (const auto& s : sub) {
    std::size_t l = 0;
    std::optional<BinaryString> parent;
    for (std::size_t k = 0; k < s.size(); ++k) {
      auto p = s.prefix(k);
      if (sub.contains(p)) {
        ++l;
        parent = std::move(p);
      }
    }
    if (s.size() != level_length(shape, l)) return false;
    level[s] = l;
    if (parent) ++succ[*parent];
  }
  for (const auto& [s, count] : succ) {
    const auto l = level.at(s);
    if (l >= f.size() || count != f[l]) return false;
  }
  return true;
}

bool is_compatible_of_level(Shape shape, const FiniteTree& sub, const std::vector<std::uint64_t>& f,
                            std::size_t n) {
  if (!is_compatible(shape, sub, f)) return false;
  for (const auto& leaf : leaves(sub)) {
    if (leaf.size() != level_length(shape, n)) return false;
  }
  return true;
}

Extraction extract_twocol(std::size_t n, const Coloring& c) {
  if (c.num_colors != 2) throw Error(ErrorKind::domain, "twocol needs a 2-colouring");
  check_colouring_domain(c, bushy_level_strings(Shape::even, n), ErrorKind::domain);
  return extract_core(Shape::even, full_tree(Shape::even, n), n, c, 0, std::vector<std::uint64_t>(n, 2));
}

Extraction extract_nice(std::size_t i, const FiniteTree& t0, const Coloring& c) {
  const auto lvl = uniform_level(t0);
  if (t0.empty() || !lvl) throw Error(ErrorKind::shape, "source tree has no uniform level");
  const auto n = *lvl;
  if (!is_compatible_of_level(Shape::graded, t0, kappa_schedule(i, n), n)) {
    throw Error(ErrorKind::shape, "source tree is not (T,kappa_" + std::to_string(i) + ") compatible of level " +
                                      std::to_string(n));
  }
  if (c.num_colors != ncol(i)) throw Error(ErrorKind::shape, "colouring must use ncol(i) colours");
  check_colouring_domain(c, leaves(t0), ErrorKind::shape);
  return extract_core(Shape::graded, t0, n, c, std::min(i, n), kappa_schedule(i + 1, n));
}

Validation verify_extraction(Shape shape, const std::vector<std::uint64_t>& f_target, std::size_t n,
                             const Coloring& c, std::uint32_t d, const FiniteTree& sub, const FiniteTree* source) {
  if (d >= c.num_colors) return Validation::fail("d=" + std::to_string(d) + " is not a colour");
  if (!is_compatible_of_level(shape, sub, f_target, n)) return Validation::fail("subtree not compatible of level " + std::to_string(n));
  if (source && !sub.is_subset_of(*source)) return Validation::fail("subtree leaves the source tree");
  for (const auto& leaf : leaves(sub)) {
    auto it = c.assignment.find(leaf);
    if (it == c.assignment.end()) return Validation::fail("leaf " + leaf.token() + " is not coloured");
    if (it->second && *it->second == d) return Validation::fail("leaf " + leaf.token() + " has colour d=" + std::to_string(d));
  }
  return Validation::pass();
}

FiniteTree random_compatible(Shape shape, const std::vector<std::uint64_t>& f, std::size_t n, std::mt19937_64& rng) {
  if (f.size() < n) throw Error(ErrorKind::shape, "branching schedule shorter than the level");
  FiniteTree t{BinaryString{}};
  std::vector<BinaryString> frontier{BinaryString{}};
  for (std::size_t k = 0; k < n; ++k) {
    const auto ext = level_length(shape, k + 1) - level_length(shape, k);
    const auto tails = strings_of_length(ext);
    if (f[k] > tails.size()) throw Error(ErrorKind::shape, "branching exceeds the shape");
    std::vector<BinaryString> next;
    for (const auto& s : frontier) {
      std::vector<std::size_t> idx(tails.size());
      std::iota(idx.begin(), idx.end(), 0);
      // Partial Fisher-Yates: the first f[k] slots are a uniform sample.
      for (std::size_t a = 0; a < f[k]; ++a) {
        std::uniform_int_distribution<std::size_t> pick(a, idx.size() - 1);
        std::swap(idx[a], idx[pick(rng)]);
      }
      for (std::size_t a = 0; a < f[k]; ++a) {
        auto kid = s + tails[idx[a]];
        t.insert(kid);
        next.push_back(kid);
      }
    }
    frontier = std::move(next);
  }
  return t;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    r = r * (n - k + j) / j;
    if (r > UINT64_MAX) throw Error(ErrorKind::resource, "binomial overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t extension_count(Shape shape, std::size_t base_level, std::size_t leaf_count, std::uint64_t width) {
  const auto ext = level_length(shape, base_level + 1) - level_length(shape, base_level);
  if (ext > 62) throw Error(ErrorKind::resource, "extension length too large");
  const auto per_leaf = binomial(std::uint64_t{1} << ext, width);
  unsigned __int128 total = 1;
  for (std::size_t k = 0; k < leaf_count; ++k) {
    total *= per_leaf;
    if (total > UINT64_MAX) throw Error(ErrorKind::resource, "extension count overflows 64 bits");
  }
  return static_cast<std::uint64_t>(total);
}

void for_each_extension(Shape shape, const FiniteTree& base, std::size_t base_level, std::uint64_t width,
                        const std::function<void(const FiniteTree&)>& visit) {
  const auto ext = level_length(shape, base_level + 1) - level_length(shape, base_level);
  const auto tails = strings_of_length(ext);
  if (width > tails.size()) return;
  std::vector<BinaryString> base_leaves;
  for (const auto& leaf : leaves(base)) {
    if (leaf.size() != level_length(shape, base_level)) throw Error(ErrorKind::shape, "base leaf off level");
    base_leaves.push_back(leaf);
  }

  FiniteTree current = base;
  std::function<void(std::size_t)> rec = [&](std::size_t leaf_index) {
    if (leaf_index == base_leaves.size()) {
      visit(current);
      return;
    }
    const auto& leaf = base_leaves[leaf_index];
    std::vector<std::size_t> pick(width);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<BinaryString> added;
      for (auto p : pick) {
        added.push_back(leaf + tails[p]);
        current.insert(added.back());
      }
      rec(leaf_index + 1);
      for (const auto& a : added) current.erase(a);
      // Next combination in lex order.
      std::size_t j = width;
      while (j > 0 && pick[j - 1] == tails.size() - width + j - 1) --j;
      if (j == 0) break;
      ++pick[j - 1];
      for (std::size_t q = j; q < width; ++q) pick[q] = pick[q - 1] + 1;
    }
  };
  rec(0);
}

Coloring random_coloring(const FiniteTree& t, std::uint32_t num_colors, std::mt19937_64& rng) {
  Coloring c;
  c.num_colors = num_colors;
  std::uniform_int_distribution<std::uint32_t> pick(0, num_colors - 1);
  for (const auto& leaf : leaves(t)) c.assignment[leaf] = pick(rng);
  return c;
}

}  // namespace pi01
