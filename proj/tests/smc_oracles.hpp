#pragma once

// Reference computations for the Omega/Pi machinery, taken straight from the
// definitions. Only basic tree queries are borrowed from the library.

#include <cstdint>
#include <string>
#include <vector>

#include "pi01/smc.hpp"

namespace oracle {

using namespace pi01;

// T(tau) straight from the axiom list.
inline FiniteTree tree_oracle(const FunctionalTable& phi, const BinaryString& tau) {
  FiniteTree t{BinaryString{}};
  for (const auto& a : phi.axioms()) {
    if (a.value == 1 && a.sigma.is_prefix_of(tau) && a.steps <= tau.size()) {
      std::size_t len = 0;
      while ((std::uint64_t{1} << (len + 1)) - 1 <= a.arg) ++len;
      const auto offset = a.arg - ((std::uint64_t{1} << len) - 1);
      std::string bits;
      for (std::size_t k = len; k-- > 0;) bits += ((offset >> k) & 1) ? '1' : '0';
      t.insert(BinaryString(bits));
    }
  }
  return t;
}

inline bool omega_oracle(const FiniteTree& t, const std::vector<std::uint64_t>& f, std::size_t n) {
  if (n == 0) return true;
  if (members_of_level(t, n).empty()) return false;
  for (const auto& x : t) {
    if (level_of(t, x) < n && successors_in(t, x).size() != 2) return false;
  }
  for (std::size_t k = 0; k <= n; ++k) {
    if (k >= f.size()) return false;
    for (const auto& x : members_of_level(t, k)) {
      if (x.size() > f[k]) return false;
    }
  }
  return true;
}

inline std::size_t omega_level_oracle(const FiniteTree& t, const std::vector<std::uint64_t>& f) {
  std::size_t best = 0;
  for (std::size_t n = 0; n <= t.size(); ++n) {
    if (omega_oracle(t, f, n)) best = n;
  }
  return best;
}

}  // namespace oracle
