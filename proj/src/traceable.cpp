#include "pi01/traceable.hpp"

#include <algorithm>

#include "pi01/error.hpp"

namespace pi01 {

namespace {

void declare_node(ConstructionState& st, const BinaryString& s, std::size_t stage) {
  std::size_t level = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (st.nodes.count(s.prefix(k))) ++level;
  }
  NodeInfo info;
  info.level = level;
  info.modules = modules_for_level(level);
  info.generation = st.next_generation++;
  info.declared_stage = stage;
  st.nodes[s] = std::move(info);
  ++st.declared_per_level[level];
}

void strip_nodes(ConstructionState& st, const std::function<bool(const BinaryString&)>& pred) {
  for (auto it = st.nodes.begin(); it != st.nodes.end();) {
    it = pred(it->first) ? st.nodes.erase(it) : std::next(it);
  }
}

bool prefix_of_any(const BinaryString& x, const std::vector<BinaryString>& keep) {
  return std::any_of(keep.begin(), keep.end(), [&](const BinaryString& k) { return x.is_prefix_of(k); });
}

// Declares terminal every extension of tau incompatible with all of `keep`
// (each keep string extends tau) and strips node status from them.
void terminate_off(ConstructionState& st, const BinaryString& tau, const std::vector<BinaryString>& keep) {
  std::vector<BinaryString> roots;
  for (const auto& k : keep) {
    for (std::size_t len = tau.size(); len < k.size(); ++len) {
      const auto x = k.prefix(len);
      for (int b = 0; b < 2; ++b) {
        auto c = x.child(b);
        if (!prefix_of_any(c, keep)) roots.push_back(std::move(c));
      }
    }
  }
  for (const auto& r : roots) st.terminal.insert(r);
  strip_nodes(st, [&](const BinaryString& s) {
    return std::any_of(roots.begin(), roots.end(), [&](const BinaryString& r) { return r.is_prefix_of(s); });
  });
}

const NodeInfo& check_module(const ConstructionState& st, const BinaryString& tau, const ModuleId& m) {
  auto it = st.nodes.find(tau);
  if (it == st.nodes.end()) throw Error(ErrorKind::protocol, tau.token() + " is not a node");
  const auto& info = it->second;
  if (std::find(info.modules.begin(), info.modules.end(), m) == info.modules.end()) {
    throw Error(ErrorKind::protocol, m.label() + " is not allocated to " + tau.token());
  }
  if (st.acted.count({tau, m, info.generation})) {
    throw Error(ErrorKind::protocol, m.label() + " at " + tau.token() + " has already acted");
  }
  return info;
}

std::uint64_t factorial(std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (r > UINT64_MAX / k) throw Error(ErrorKind::resource, "factorial overflows 64 bits");
    r *= k;
  }
  return r;
}

std::uint64_t pow2_times(std::size_t e, std::uint64_t x) {
  if (e >= 64 || x > (UINT64_MAX >> e)) throw Error(ErrorKind::resource, "bound overflows 64 bits");
  return x << e;
}

}  // namespace

std::string ModuleId::label() const {
  return kind == Kind::C ? "C(" + std::to_string(i) + "," + std::to_string(n) + ")" : "P(" + std::to_string(i) + ")";
}

std::vector<ModuleId> modules_for_level(std::size_t n) {
  std::vector<ModuleId> out;
  for (std::size_t k = 0; k <= n; ++k) out.push_back(ModuleId::c(k, n - k));
  out.push_back(ModuleId::p(n));
  return out;
}

ConstructionState init_state() {
  ConstructionState st;
  st.pi.insert(BinaryString{});
  declare_node(st, BinaryString{}, 0);
  return st;
}

bool is_terminal(const ConstructionState& st, const BinaryString& s) {
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (st.terminal.count(s.prefix(k))) return true;
  }
  return false;
}

std::vector<BinaryString> frontier(const ConstructionState& st, std::size_t len) {
  std::vector<BinaryString> out;
  for (const auto& s : st.pi) {
    if (s.size() == len && !is_terminal(st, s)) out.push_back(s);
  }
  return out;
}

std::vector<BinaryString> successor_nodes(const ConstructionState& st, const BinaryString& tau) {
  std::vector<BinaryString> out;
  for (const auto& [s, info] : st.nodes) {
    if (!tau.is_proper_prefix_of(s)) continue;
    bool minimal = true;
    for (std::size_t k = tau.size() + 1; k < s.size() && minimal; ++k) {
      if (st.nodes.count(s.prefix(k))) minimal = false;
    }
    if (minimal) out.push_back(s);
  }
  return out;
}

BinaryString empty_oracle_output(const FunctionalTable& f, std::uint64_t max_steps) {
  std::vector<std::uint64_t> values;
  for (std::uint64_t n = 0;; ++n) {
    auto v = eval_within(f, BinaryString{}, n, max_steps);
    if (!v) break;
    values.push_back(*v);
  }
  return bit_prefix(values);
}

std::optional<ConstructionState> act_c_module(const ConstructionState& st, const BinaryString& tau, const ModuleId& m,
                                              const AdversaryBundle& adv) {
  if (m.kind != ModuleId::Kind::C) throw Error(ErrorKind::protocol, m.label() + " is not a C module");
  const auto& info = check_module(st, tau, m);
  const std::size_t s = st.stage;
  if (m.i >= adv.psi.size() || tau.size() >= s) return std::nullopt;
  const auto& psi = adv.psi[m.i];

  const auto front = frontier(st, s);
  for (std::size_t len = tau.size(); len < s; ++len) {
    for (const auto& tail : strings_of_length(len - tau.size())) {
      const auto cand = tau + tail;
      auto value = eval_within(psi, cand, m.n, s);
      if (!value) continue;
      std::vector<BinaryString> pair;
      for (const auto& f : front) {
        if (cand.is_prefix_of(f)) pair.push_back(f);
        if (pair.size() == 2) break;
      }
      if (pair.size() < 2) continue;

      ConstructionState next = st;
      const auto generation = info.generation;
      strip_nodes(next, [&](const BinaryString& x) { return tau.is_proper_prefix_of(x); });
      terminate_off(next, tau, pair);
      for (const auto& p : pair) declare_node(next, p, s + 1);
      next.acted.insert({tau, m, generation});
      const TraceTuple tuple{m.i, m.n, *value};
      next.tuples.insert(tuple);
      next.tuple_log.push_back({tau, generation, info.level, tuple});
      ++next.actions;
      return next;
    }
  }
  return std::nullopt;
}

std::optional<ConstructionState> act_p_module(const ConstructionState& st, const BinaryString& tau, const ModuleId& m,
                                              const AdversaryBundle& adv) {
  if (m.kind != ModuleId::Kind::P) throw Error(ErrorKind::protocol, m.label() + " is not a P module");
  const auto& info = check_module(st, tau, m);
  const std::size_t s = st.stage;
  if (s + 1 < info.declared_stage + 2 || m.i >= adv.psi.size()) return std::nullopt;
  const auto succ = successor_nodes(st, tau);
  if (succ.size() != 2) return std::nullopt;
  const auto out = empty_oracle_output(adv.psi[m.i], s);
  for (std::size_t k = 0; k < 2; ++k) {
    if (!succ[k].is_prefix_of(out)) continue;
    ConstructionState next = st;
    terminate_off(next, tau, {succ[1 - k]});
    next.acted.insert({tau, m, info.generation});
    ++next.actions;
    return next;
  }
  return std::nullopt;
}

ConstructionState run_stage(const ConstructionState& st, const AdversaryBundle& adv) {
  ConstructionState cur = st;
  const std::size_t s = st.stage;

  std::vector<std::tuple<std::size_t, BinaryString, std::uint64_t>> order;
  for (const auto& [tau, info] : st.nodes) order.emplace_back(info.level, tau, info.generation);
  std::sort(order.begin(), order.end());

  for (const auto& [level, tau, generation] : order) {
    auto it = cur.nodes.find(tau);
    if (it == cur.nodes.end() || it->second.generation != generation) continue;
    const auto modules = it->second.modules;
    for (const auto& m : modules) {
      if (cur.acted.count({tau, m, generation})) continue;
      auto res = m.kind == ModuleId::Kind::C ? act_c_module(cur, tau, m, adv) : act_p_module(cur, tau, m, adv);
      if (res) {
        cur = std::move(*res);
        break;
      }
    }
  }

  for (const auto& parent : frontier(cur, s)) {
    for (int b = 0; b < 2; ++b) {
      auto child = parent.child(b);
      if (is_terminal(cur, child)) continue;
      cur.pi.insert(child);
      declare_node(cur, child, s + 1);
    }
  }
  cur.stage = s + 1;
  return cur;
}

ConstructionState run_to(const ConstructionState& st, const AdversaryBundle& adv, std::size_t horizon) {
  ConstructionState cur = st;
  while (cur.stage < horizon) cur = run_stage(cur, adv);
  return cur;
}

TraceReport extract_trace(const ConstructionState& st) {
  TraceReport out;
  for (const auto& [i, n, d] : st.tuples) out[i][n].insert(d);
  return out;
}

bool is_quiescent(const ConstructionState& st, const AdversaryBundle& adv) {
  for (const auto& f : adv.psi) {
    for (const auto& a : f.axioms()) {
      if (a.steps > st.stage) return false;
    }
  }
  const auto later = run_stage(run_stage(st, adv), adv);
  return later.actions == st.actions;
}

Validation verify_final_nodes(const ConstructionState& st, const AdversaryBundle& adv) {
  const auto front = frontier(st, st.stage);
  for (const auto& [tau, info] : st.nodes) {
    if (tau.size() >= st.stage) continue;
    const auto succ = successor_nodes(st, tau);
    if (succ.empty()) return Validation::fail("(1) node " + tau.token() + " has no successor node");
    if (info.level < adv.psi.size()) {
      const auto out = empty_oracle_output(adv.psi[info.level], UINT64_MAX);
      for (const auto& s : succ) {
        if (s.is_prefix_of(out)) {
          return Validation::fail("(2) successor " + s.token() + " of " + tau.token() + " lies on Psi_" +
                                  std::to_string(info.level) + "(e)=" + out.token());
        }
      }
    }
    for (const auto& f : front) {
      if (!tau.is_prefix_of(f)) continue;
      bool covered = std::any_of(succ.begin(), succ.end(), [&](const BinaryString& s) { return s.is_prefix_of(f); });
      if (!covered) return Validation::fail("(3) " + f.token() + " avoids every successor of " + tau.token());
    }
  }
  return Validation::pass();
}

std::uint64_t node_bound(std::size_t n) { return pow2_times(n, factorial(n + 1)); }

std::uint64_t trace_bound(std::size_t i, std::size_t n) { return pow2_times(n + i, factorial(n + i + 1)); }

std::uint64_t p_family(std::size_t i, std::size_t n) { return pow2_times(n + i, factorial(n + i)); }

}  // namespace pi01
