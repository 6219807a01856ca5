#include "pi01/functional.hpp"

#include <algorithm>
#include <sstream>

#include "pi01/error.hpp"

namespace pi01 {

namespace {

std::string describe(const Axiom& a) {
  std::ostringstream os;
  os << "(" << a.sigma.token() << " " << a.arg << " " << a.value << " " << a.steps << ")";
  return os.str();
}

}  // namespace

FunctionalTable::FunctionalTable(std::vector<Axiom> axioms) {
  for (const auto& a : axioms) add(a);
}

std::optional<std::size_t> FunctionalTable::clash_with(const Axiom& axiom) const {
  auto it = by_arg_.find(axiom.arg);
  if (it == by_arg_.end()) return std::nullopt;
  for (auto idx : it->second) {
    const auto& other = axioms_[idx];
    if (other.value != axiom.value && other.sigma.compatible_with(axiom.sigma)) return idx;
  }
  return std::nullopt;
}

void FunctionalTable::add(const Axiom& axiom) {
  if (axiom.steps == 0) throw Error(ErrorKind::consistency, "axiom " + describe(axiom) + " has steps 0");
  if (auto idx = clash_with(axiom)) {
    throw Error(ErrorKind::consistency, "axiom #" + std::to_string(*idx) + " " + describe(axioms_[*idx]) +
                                            " clashes with axiom #" + std::to_string(axioms_.size()) + " " +
                                            describe(axiom));
  }
  const auto index = axioms_.size();
  axioms_.push_back(axiom);
  by_arg_[axiom.arg].push_back(index);
  auto key = std::make_pair(axiom.sigma, axiom.arg);
  auto [it, inserted] = by_key_.emplace(key, index);
  if (!inserted && axioms_[it->second].steps > axiom.steps) it->second = index;
}

bool FunctionalTable::try_add(const Axiom& axiom) {
  if (axiom.steps == 0 || clash_with(axiom)) return false;
  add(axiom);
  return true;
}

std::optional<std::uint64_t> FunctionalTable::max_arg() const {
  if (by_arg_.empty()) return std::nullopt;
  return by_arg_.rbegin()->first;
}

std::optional<Convergence> FunctionalTable::lookup(const BinaryString& tau, std::uint64_t n,
                                                   std::uint64_t max_steps) const {
  if (!by_arg_.count(n)) return std::nullopt;
  std::optional<Convergence> best;
  for (std::size_t k = 0; k <= tau.size(); ++k) {
    auto it = by_key_.find({tau.prefix(k), n});
    if (it == by_key_.end()) continue;
    const auto& a = axioms_[it->second];
    if (a.steps > max_steps) continue;
    if (!best || a.steps < best->steps) best = Convergence{a.value, a.steps, k};
  }
  return best;
}

std::optional<std::uint64_t> eval(const FunctionalTable& f, const BinaryString& tau, std::uint64_t n) {
  auto c = f.lookup(tau, n);
  if (!c) return std::nullopt;
  return c->value;
}

std::optional<std::uint64_t> eval_within(const FunctionalTable& f, const BinaryString& tau, std::uint64_t n,
                                         std::uint64_t max_steps) {
  auto c = f.lookup(tau, n, max_steps);
  if (!c) return std::nullopt;
  return c->value;
}

std::vector<std::uint64_t> output(const FunctionalTable& f, const BinaryString& tau) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 0;; ++n) {
    auto v = eval(f, tau, n);
    if (!v) break;
    out.push_back(*v);
  }
  return out;
}

std::vector<std::uint64_t> hat_output(const FunctionalTable& f, const BinaryString& tau) {
  // hat(rho; n) needs hat(rho^-; n') for all n' < n, so each extra bit can
  // extend the defined sequence by at most one argument.
  std::vector<std::uint64_t> prev;
  for (std::size_t k = 1; k <= tau.size(); ++k) {
    const auto rho = tau.prefix(k);
    std::vector<std::uint64_t> cur;
    for (std::uint64_t n = 0; n <= prev.size(); ++n) {
      auto c = f.lookup(rho, n, k - 1);
      if (!c) break;
      cur.push_back(c->value);
    }
    prev = std::move(cur);
  }
  return prev;
}

std::optional<std::uint64_t> hat_eval(const FunctionalTable& f, const BinaryString& tau, std::uint64_t n) {
  auto out = hat_output(f, tau);
  if (n >= out.size()) return std::nullopt;
  return out[n];
}

std::vector<std::uint64_t> outputs(const FunctionalTable& f, const BinaryString& tau, Outputs which) {
  return which == Outputs::plain ? output(f, tau) : hat_output(f, tau);
}

BinaryString bit_prefix(const std::vector<std::uint64_t>& values) {
  std::string bits;
  for (auto v : values) {
    if (v > 1) break;
    bits.push_back(v ? '1' : '0');
  }
  return BinaryString(bits);
}

bool outputs_incompatible(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  const auto common = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < common; ++k) {
    if (a[k] != b[k]) return true;
  }
  return false;
}

bool is_splitting_pair(const FunctionalTable& f, const BinaryString& a, const BinaryString& b, Outputs which) {
  if (a.compatible_with(b)) {
    throw Error(ErrorKind::precondition, a.token() + " and " + b.token() + " are compatible");
  }
  return outputs_incompatible(outputs(f, a, which), outputs(f, b, which));
}

std::optional<std::pair<BinaryString, BinaryString>> splitting_violation(const FunctionalTable& f,
                                                                         const FiniteTree& t, bool delayed,
                                                                         Outputs which) {
  const auto members = t.sorted();
  std::map<BinaryString, std::vector<std::uint64_t>> out;
  for (const auto& m : members) out.emplace(m, outputs(f, m, which));

  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const auto& t0 = members[a];
      const auto& t1 = members[b];
      if (t0.compatible_with(t1)) continue;
      if (!delayed) {
        if (!outputs_incompatible(out[t0], out[t1])) return std::make_pair(t0, t1);
        continue;
      }
      for (const auto& t2 : members) {
        if (!t0.is_proper_prefix_of(t2)) continue;
        for (const auto& t3 : members) {
          if (!t1.is_proper_prefix_of(t3)) continue;
          if (!outputs_incompatible(out[t2], out[t3])) return std::make_pair(t2, t3);
        }
      }
    }
  }
  return std::nullopt;
}

bool is_splitting_tree(const FunctionalTable& f, const FiniteTree& t, bool delayed, Outputs which) {
  return !splitting_violation(f, t, delayed, which).has_value();
}

WeakSplitWitness build_weak_splitting_tree(const FunctionalTable& psi, const FunctionalTable& phi,
                                           std::size_t length_budget) {
  if (length_budget > 20) throw Error(ErrorKind::resource, "length budget above 20");
  WeakSplitWitness w;
  for (std::size_t len = 0; len <= length_budget; ++len) {
    for (const auto& tau : strings_of_length(len)) {
      const auto psi_hat = hat_output(psi, tau);
      const auto oracle = bit_prefix(psi_hat);
      const auto decoded = hat_output(phi, oracle);

      std::optional<std::uint64_t> agree;  // greatest n with agreement on all args <= n
      for (std::size_t k = 0; k < tau.size() && k < decoded.size(); ++k) {
        if (decoded[k] != static_cast<std::uint64_t>(tau[k])) break;
        agree = k;
      }
      if (!agree) continue;

      std::optional<std::uint64_t> best_before;
      for (std::size_t k = 0; k < tau.size(); ++k) {
        auto it = w.phi.find(tau.prefix(k));
        if (it != w.phi.end() && (!best_before || it->second > *best_before)) best_before = it->second;
      }
      if (best_before && *agree <= *best_before) continue;

      std::uint64_t max_used = 0;
      for (std::uint64_t n = 0; n <= *agree; ++n) {
        auto c = phi.lookup(oracle, n, oracle.size() - 1);
        if (c && c->use > 0) max_used = std::max<std::uint64_t>(max_used, c->use - 1);
      }
      if (psi_hat.size() <= max_used) continue;

      w.tree.insert(tau);
      w.phi[tau] = *agree;
      w.psi[tau] = max_used;
      w.order.push_back(tau);
    }
  }
  return w;
}

Validation check_weak_splitting(const WeakSplitWitness& w, const FunctionalTable& psi,
                                const BinaryString& path_prefix) {
  std::map<BinaryString, std::vector<std::uint64_t>> out;
  for (const auto& tau : w.tree) {
    auto ph = w.phi.find(tau);
    auto ps = w.psi.find(tau);
    if (ph == w.phi.end() || ps == w.psi.end()) return Validation::fail("phi/psi undefined on " + tau.token());
    out[tau] = output(psi, tau);
    if (ph->second >= tau.size()) return Validation::fail("(1) phi(" + tau.token() + ") >= |tau|");
    if (ps->second >= out[tau].size()) return Validation::fail("(1) psi(" + tau.token() + ") >= |Psi(tau)|");
  }
  if (w.phi.size() != w.tree.size() || w.psi.size() != w.tree.size()) {
    return Validation::fail("phi/psi domain differs from tree");
  }

  const auto members = w.tree.sorted();
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const auto& x = members[a];
      const auto& y = members[b];
      const auto phi_min = std::min(w.phi.at(x), w.phi.at(y));
      bool differ = false;
      for (std::size_t p = 0; p <= phi_min && p < x.size() && p < y.size(); ++p) {
        if (x[p] != y[p]) {
          differ = true;
          break;
        }
      }
      if (!differ) continue;
      const auto psi_min = std::min(w.psi.at(x), w.psi.at(y));
      const auto& ox = out[x];
      const auto& oy = out[y];
      bool split = false;
      for (std::size_t k = 0; k <= psi_min && k < ox.size() && k < oy.size(); ++k) {
        if (ox[k] != oy[k]) {
          split = true;
          break;
        }
      }
      if (!split) return Validation::fail("(2) " + x.token() + " " + y.token());
    }
  }

  std::optional<std::uint64_t> last;
  for (const auto& tau : members) {
    if (!tau.is_prefix_of(path_prefix)) continue;
    const auto v = w.phi.at(tau);
    if (last && v <= *last) return Validation::fail("(3*) phi not increasing at " + tau.token());
    last = v;
  }
  return Validation::pass();
}

std::optional<BinaryString> decode_initial_segment(const WeakSplitWitness& w, const FunctionalTable& psi,
                                                   const BinaryString& oracle_prefix, std::size_t n) {
  for (const auto& tau : w.order) {
    const auto use = w.psi.at(tau);
    if (w.phi.at(tau) + 1 < n) continue;
    if (use >= oracle_prefix.size()) continue;
    const auto out = output(psi, tau);
    bool agrees = true;
    for (std::size_t k = 0; k <= use; ++k) {
      if (k >= out.size() || out[k] != static_cast<std::uint64_t>(oracle_prefix[k])) {
        agrees = false;
        break;
      }
    }
    if (agrees && tau.size() >= n) return tau.prefix(n);
  }
  return std::nullopt;
}

bool is_own_hat_restriction(const FunctionalTable& f, const FiniteTree& t) {
  for (const auto& tau : t) {
    if (output(f, tau) != hat_output(f, tau)) return false;
  }
  return true;
}

FiniteTree image_tree(const FunctionalTable& f, const FiniteTree& t) {
  if (!is_own_hat_restriction(f, t)) throw Error(ErrorKind::validation, "functional differs from its hat restriction");
  if (!is_two_branching(t)) throw Error(ErrorKind::validation, "source tree is not 2-branching");
  if (auto bad = splitting_violation(f, t, false)) {
    throw Error(ErrorKind::validation, "source tree not splitting at " + bad->first.token() + " " + bad->second.token());
  }
  FiniteTree image;
  for (const auto& tau : t) {
    const auto out = output(f, tau);
    const auto bits = bit_prefix(out);
    if (bits.size() != out.size()) throw Error(ErrorKind::validation, "non-bit output on " + tau.token());
    image.insert(bits);
  }
  if (image.size() != t.size() || !is_two_branching(image)) {
    throw Error(ErrorKind::validation, "image is not a 2-branching tree");
  }
  return image;
}

FiniteTree pullback_tree(const FunctionalTable& f, const FiniteTree& t0, const FiniteTree& t2) {
  const auto t1 = image_tree(f, t0);
  if (!t2.is_subset_of(t1)) throw Error(ErrorKind::validation, "target is not a subtree of the image");
  if (!is_two_branching(t2)) throw Error(ErrorKind::validation, "target is not 2-branching");
  FiniteTree out;
  for (const auto& tau : t0) {
    if (t2.contains(bit_prefix(output(f, tau)))) out.insert(tau);
  }
  if (!is_two_branching(out)) throw Error(ErrorKind::internal, "pullback lost 2-branching");
  return out;
}

}  // namespace pi01
