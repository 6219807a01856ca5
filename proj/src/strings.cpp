#include "pi01/strings.hpp"

#include <algorithm>
#include <sstream>

#include "pi01/error.hpp"

namespace pi01 {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::not_a_member: return "not-a-member";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::resource: return "resource";
    case ErrorKind::shape: return "shape";
    case ErrorKind::depth: return "depth";
    case ErrorKind::format: return "format";
    case ErrorKind::protocol: return "protocol";
    case ErrorKind::validation: return "validation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::normalization: return "normalization";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

BinaryString::BinaryString(std::string_view bits) : bits_(bits) {
  for (char c : bits_) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::format, "not a binary string: '" + std::string(bits) + "'");
    }
  }
}

BinaryString BinaryString::from_token(std::string_view token) {
  if (token == "e") return {};
  if (token.empty()) throw Error(ErrorKind::format, "empty string token; use 'e'");
  return BinaryString(token);
}

BinaryString BinaryString::from_uint(std::uint64_t value, std::size_t width) {
  std::string bits(width, '0');
  for (std::size_t k = 0; k < width && k < 64; ++k) {
    if ((value >> k) & 1U) bits[width - 1 - k] = '1';
  }
  BinaryString out;
  out.bits_ = std::move(bits);
  return out;
}

BinaryString BinaryString::prefix(std::size_t n) const {
  if (n > size()) throw Error(ErrorKind::domain, "prefix longer than string");
  BinaryString out;
  out.bits_ = bits_.substr(0, n);
  return out;
}

BinaryString BinaryString::parent() const { return empty() ? *this : prefix(size() - 1); }

BinaryString BinaryString::child(int bit) const {
  BinaryString out = *this;
  out.bits_.push_back(bit ? '1' : '0');
  return out;
}

BinaryString BinaryString::operator+(const BinaryString& tail) const {
  BinaryString out = *this;
  out.bits_ += tail.bits_;
  return out;
}

bool BinaryString::is_prefix_of(const BinaryString& other) const noexcept {
  return size() <= other.size() && other.bits_.compare(0, size(), bits_) == 0;
}

std::vector<BinaryString> strings_of_length(std::size_t length) {
  if (length > 30) throw Error(ErrorKind::resource, "refusing to enumerate 2^" + std::to_string(length) + " strings");
  std::vector<BinaryString> out;
  out.reserve(std::size_t{1} << length);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << length); ++v) {
    out.push_back(BinaryString::from_uint(v, length));
  }
  return out;
}

bool FiniteTree::is_subset_of(const FiniteTree& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

const FiniteTree& StagedTree::final_stage() const {
  if (stages.empty()) throw Error(ErrorKind::empty_input, "staged tree has no stages");
  return stages.back();
}

std::size_t level_of(const FiniteTree& t, const BinaryString& tau) {
  if (!t.contains(tau)) throw Error(ErrorKind::not_a_member, tau.token() + " is not a member");
  std::size_t level = 0;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    if (t.contains(tau.prefix(k))) ++level;
  }
  return level;
}

std::vector<BinaryString> successors_in(const FiniteTree& t, const BinaryString& tau) {
  std::vector<BinaryString> out;
  for (const auto& rho : t) {
    if (!tau.is_proper_prefix_of(rho)) continue;
    bool minimal = true;
    for (std::size_t k = tau.size() + 1; k < rho.size() && minimal; ++k) {
      if (t.contains(rho.prefix(k))) minimal = false;
    }
    if (minimal) out.push_back(rho);
  }
  return out;
}

LeafInfo leaves_and_successors(const FiniteTree& t, const BinaryString& tau) {
  if (!t.contains(tau)) throw Error(ErrorKind::not_a_member, tau.token() + " is not a member");
  LeafInfo info;
  info.successors = successors_in(t, tau);
  info.is_leaf = info.successors.empty();
  return info;
}

std::vector<BinaryString> leaves(const FiniteTree& t) {
  // A member is a leaf iff no member properly extends it; checking the
  // member's proper prefixes from every other member is quadratic, so mark
  // prefixes instead.
  std::set<BinaryString> has_extension;
  for (const auto& rho : t) {
    for (std::size_t k = 0; k < rho.size(); ++k) {
      auto p = rho.prefix(k);
      if (t.contains(p)) has_extension.insert(std::move(p));
    }
  }
  std::vector<BinaryString> out;
  for (const auto& rho : t) {
    if (!has_extension.count(rho)) out.push_back(rho);
  }
  return out;
}

std::vector<BinaryString> members_of_level(const FiniteTree& t, std::size_t level) {
  std::vector<BinaryString> out;
  for (const auto& rho : t) {
    if (level_of(t, rho) == level) out.push_back(rho);
  }
  return out;
}

std::optional<std::size_t> uniform_level(const FiniteTree& t) {
  std::optional<std::size_t> level;
  for (const auto& leaf : leaves(t)) {
    auto l = level_of(t, leaf);
    if (level && *level != l) return std::nullopt;
    level = l;
  }
  return level;
}

FiniteTree cone(const FiniteTree& t, const BinaryString& tau) {
  FiniteTree out;
  for (const auto& rho : t) {
    if (tau.is_prefix_of(rho)) out.insert(rho);
  }
  return out;
}

FiniteTree truncate_to_level(const FiniteTree& t, std::size_t max_level) {
  FiniteTree out;
  for (const auto& rho : t) {
    if (level_of(t, rho) <= max_level) out.insert(rho);
  }
  return out;
}

bool is_prefix_free(std::span<const BinaryString> strings) {
  for (std::size_t a = 0; a < strings.size(); ++a) {
    for (std::size_t b = a + 1; b < strings.size(); ++b) {
      if (strings[a].compatible_with(strings[b])) return false;
    }
  }
  return true;
}

bool is_prefix_free(const FiniteTree& strings) {
  auto v = strings.sorted();
  return is_prefix_free(std::span<const BinaryString>(v));
}

namespace {

bool extends_leaf_of(const FiniteTree& t, const BinaryString& tau) {
  for (std::size_t k = 0; k <= tau.size(); ++k) {
    auto p = tau.prefix(k);
    if (t.contains(p) && successors_in(t, p).empty()) return true;
  }
  return false;
}

}  // namespace

Validation validate_staged_ce_tree(const StagedTree& st, bool weak) {
  if (st.stages.empty()) return Validation::fail("no stages");
  if (st.stages.front().size() != 1) return Validation::fail("|T_0| != 1");
  if (weak && !st.stages.front().contains(BinaryString{})) return Validation::fail("T_0 != {e}");
  for (std::size_t s = 0; s + 1 < st.stages.size(); ++s) {
    const auto& cur = st.stages[s];
    const auto& next = st.stages[s + 1];
    if (!cur.is_subset_of(next)) return Validation::fail("stage " + std::to_string(s + 1) + " drops a member");
    std::vector<BinaryString> added;
    for (const auto& rho : next) {
      if (!cur.contains(rho)) added.push_back(rho);
    }
    if (weak && added.size() > 1) {
      return Validation::fail("stage " + std::to_string(s + 1) + " adds " + std::to_string(added.size()) + " strings");
    }
    for (const auto& rho : added) {
      if (weak) {
        if (!successors_in(next, rho).empty()) {
          return Validation::fail("stage " + std::to_string(s + 1) + ": " + rho.token() + " is not a leaf");
        }
      } else if (!extends_leaf_of(cur, rho)) {
        return Validation::fail("stage " + std::to_string(s + 1) + ": " + rho.token() + " extends no leaf");
      }
    }
  }
  return Validation::pass();
}

StagedTree merge_stages(const StagedTree& st) {
  if (st.stages.size() <= 2) return st;
  return StagedTree{{st.stages.front(), st.stages.back()}};
}

BranchingStats branching_stats(const FiniteTree& t) {
  if (t.empty()) throw Error(ErrorKind::empty_input, "branching_stats of empty tree");
  BranchingStats stats;
  std::optional<std::size_t> first_bad_level;
  for (const auto& tau : t) {
    auto succ = successors_in(t, tau).size();
    stats.max_succ = std::max(stats.max_succ, succ);
    if (succ == 1) stats.perfect = false;
    if (succ != 2) {
      auto l = level_of(t, tau);
      if (!first_bad_level || l < *first_bad_level) first_bad_level = l;
    }
  }
  // A finite nonempty tree always has a leaf, so first_bad_level is set.
  stats.two_branching_below = first_bad_level.value_or(0);
  return stats;
}

bool is_two_branching(const FiniteTree& t) {
  if (t.empty()) return false;
  std::size_t roots = 0;
  for (const auto& tau : t) {
    if (level_of(t, tau) == 0) ++roots;
    auto succ = successors_in(t, tau).size();
    if (succ != 0 && succ != 2) return false;
  }
  return roots == 1;
}

FiniteTree downward_closure(const FiniteTree& s) {
  FiniteTree out;
  for (const auto& rho : s) {
    for (std::size_t k = 0; k <= rho.size(); ++k) out.insert(rho.prefix(k));
  }
  return out;
}

}  // namespace pi01
