#pragma once

// Finite binary strings and explicit finite sets of them.
//
// A tree here is only a member set: it need not be downward closed, and all
// level/leaf/successor structure is recomputed from the members on demand.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pi01 {

class BinaryString {
 public:
  BinaryString() = default;
  explicit BinaryString(std::string_view bits);

  /// Parses the I/O token form: "e" is the empty string, otherwise 0/1 chars.
  static BinaryString from_token(std::string_view token);
  /// Most significant bit first, exactly `width` bits.
  static BinaryString from_uint(std::uint64_t value, std::size_t width);

  std::string token() const { return bits_.empty() ? std::string("e") : bits_; }
  const std::string& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }

  BinaryString prefix(std::size_t n) const;
  /// tau^- : drops the last bit; the empty string maps to itself.
  BinaryString parent() const;
  BinaryString child(int bit) const;
  BinaryString operator+(const BinaryString& tail) const;

  bool is_prefix_of(const BinaryString& other) const noexcept;
  bool is_proper_prefix_of(const BinaryString& other) const noexcept {
    return size() < other.size() && is_prefix_of(other);
  }
  bool compatible_with(const BinaryString& other) const noexcept {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  /// Length-lexicographic order: shorter first, then lexicographic.
  friend std::strong_ordering operator<=>(const BinaryString& a, const BinaryString& b) noexcept {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.bits_.compare(b.bits_) <=> 0;
  }
  friend bool operator==(const BinaryString& a, const BinaryString& b) noexcept = default;

 private:
  std::string bits_;
};

/// All strings of exactly `length` bits, in lexicographic order.
std::vector<BinaryString> strings_of_length(std::size_t length);

class FiniteTree {
 public:
  using container = std::set<BinaryString>;
  using const_iterator = container::const_iterator;

  FiniteTree() = default;
  FiniteTree(std::initializer_list<BinaryString> members) : members_(members) {}
  template <class It>
  FiniteTree(It first, It last) : members_(first, last) {}
  explicit FiniteTree(std::span<const BinaryString> members)
      : members_(members.begin(), members.end()) {}

  bool contains(const BinaryString& s) const { return members_.count(s) != 0; }
  bool insert(const BinaryString& s) { return members_.insert(s).second; }
  bool erase(const BinaryString& s) { return members_.erase(s) != 0; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }
  const container& members() const noexcept { return members_; }
  std::vector<BinaryString> sorted() const { return {members_.begin(), members_.end()}; }

  bool is_subset_of(const FiniteTree& other) const;

  friend bool operator==(const FiniteTree&, const FiniteTree&) = default;

 private:
  container members_;
};

/// Cumulative snapshots T_0, T_1, ..., T_S of an enumerated tree.
struct StagedTree {
  std::vector<FiniteTree> stages;

  const FiniteTree& final_stage() const;
};

/// Outcome of a structural check, carrying the first violation found.
struct Validation {
  bool ok = true;
  std::string witness;

  static Validation pass() { return {}; }
  static Validation fail(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const noexcept { return ok; }
};

struct LeafInfo {
  bool is_leaf = true;
  std::vector<BinaryString> successors;
};

struct BranchingStats {
  std::size_t max_succ = 0;
  bool perfect = true;
  std::size_t two_branching_below = 0;
};

/// Number of proper initial segments of tau lying in t.
std::size_t level_of(const FiniteTree& t, const BinaryString& tau);
LeafInfo leaves_and_successors(const FiniteTree& t, const BinaryString& tau);
/// Minimal proper extensions of tau in t; tau need not be a member.
std::vector<BinaryString> successors_in(const FiniteTree& t, const BinaryString& tau);
std::vector<BinaryString> leaves(const FiniteTree& t);
std::vector<BinaryString> members_of_level(const FiniteTree& t, std::size_t level);
/// The level shared by every leaf, if there is one.
std::optional<std::size_t> uniform_level(const FiniteTree& t);
/// Members of t extending tau (tau included when it is a member).
FiniteTree cone(const FiniteTree& t, const BinaryString& tau);
FiniteTree truncate_to_level(const FiniteTree& t, std::size_t max_level);

bool is_prefix_free(std::span<const BinaryString> strings);
bool is_prefix_free(const FiniteTree& strings);

Validation validate_staged_ce_tree(const StagedTree& st, bool weak);
/// Collapses a staged tree to its first and last snapshots.
StagedTree merge_stages(const StagedTree& st);

BranchingStats branching_stats(const FiniteTree& t);
/// One member of level 0 and every non-leaf has exactly two successors.
bool is_two_branching(const FiniteTree& t);

FiniteTree downward_closure(const FiniteTree& s);

}  // namespace pi01

template <>
struct std::hash<pi01::BinaryString> {
  std::size_t operator()(const pi01::BinaryString& s) const noexcept {
    return std::hash<std::string>{}(s.bits()) ^ (s.size() * 0x9e3779b97f4a7c15ULL);
  }
};
