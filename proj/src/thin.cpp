#include "pi01/thin.hpp"

#include <algorithm>

#include "pi01/error.hpp"

namespace pi01 {

namespace {

Rational pow2_inverse(std::size_t k) {
  return Rational(1, boost::multiprecision::cpp_int(1) << k);
}

std::size_t bit_length(std::uint64_t v) {
  std::size_t len = 0;
  while (v) {
    ++len;
    v >>= 1;
  }
  return len;
}

std::uint64_t checked_pow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t k = 0; k < e; ++k) {
    if (base != 0 && r > UINT64_MAX / base) throw Error(ErrorKind::resource, "power overflows 64 bits");
    r *= base;
  }
  return r;
}

std::uint64_t bits_to_code(const std::string& bits) {
  if (bits.size() > 64) throw Error(ErrorKind::resource, "code longer than 64 bits");
  std::uint64_t v = 0;
  for (char c : bits) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v;
}

std::string code_to_bits(std::uint64_t code) {
  std::string bits;
  for (std::size_t k = bit_length(code); k-- > 0;) bits.push_back(((code >> k) & 1) ? '1' : '0');
  return bits;
}

// Reads one selfdelim_prefix block starting at pos; advances pos past it.
std::optional<std::uint64_t> read_block(const std::string& bits, std::size_t& pos) {
  std::uint64_t v = 0;
  bool first = true;
  while (pos < bits.size()) {
    if (pos + 2 > bits.size()) return std::nullopt;
    const char digit = bits[pos];
    const char marker = bits[pos + 1];
    pos += 2;
    if (first && digit != '1') return std::nullopt;
    first = false;
    if (v >> 63) return std::nullopt;
    v = (v << 1) | static_cast<std::uint64_t>(digit == '1');
    if (marker == '1') return v;
  }
  return std::nullopt;
}

FiniteTree union_of_stages(const StagedTree& t) {
  if (t.stages.empty()) throw Error(ErrorKind::empty_input, "staged tree has no stages");
  return t.final_stage();
}

}  // namespace

Validation check_trace_sizes(const TraceSystem& ts) {
  for (const auto& [n, values] : ts.w) {
    if (n < ts.p.size() && values.size() > ts.p[n]) {
      return Validation::fail("|w[" + std::to_string(n) + "]| = " + std::to_string(values.size()) + " > p = " +
                              std::to_string(ts.p[n]));
    }
  }
  return Validation::pass();
}

std::vector<std::size_t> caught_arguments(const TraceSystem& ts, const std::vector<std::uint64_t>& f) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < f.size(); ++n) {
    auto it = ts.w.find(n);
    if (it != ts.w.end() && it->second.count(f[n])) out.push_back(n);
  }
  return out;
}

Rational kraft_weight(const FiniteTree& t, const BinaryString& tau, const std::vector<BinaryString>& lambda_set) {
  if (!t.contains(tau)) throw Error(ErrorKind::domain, tau.token() + " is not a member");
  if (!is_prefix_free(std::span<const BinaryString>(lambda_set))) throw Error(ErrorKind::domain, "set is not prefix-free");
  const auto base = level_of(t, tau);
  Rational sum = 0;
  for (const auto& x : lambda_set) {
    if (!t.contains(x) || !tau.is_prefix_of(x)) {
      throw Error(ErrorKind::domain, x.token() + " is not a member extending " + tau.token());
    }
    sum += pow2_inverse(level_of(t, x) - base);
  }
  return sum;
}

std::optional<ThinViolation> thin_violation(const FiniteTree& t, const FiniteTree& tp) {
  if (!tp.is_subset_of(t)) throw Error(ErrorKind::domain, "subset is not contained in the tree");
  if (!tp.contains(BinaryString{})) return ThinViolation{BinaryString{}, {}, Rational(0)};

  auto members = tp.sorted();
  // Children of a member: its minimal proper extensions inside tp.
  std::map<BinaryString, std::vector<BinaryString>> children;
  for (const auto& x : members) {
    for (std::size_t k = x.size(); k-- > 0;) {
      const auto pre = x.prefix(k);
      if (tp.contains(pre)) {
        children[pre].push_back(x);
        break;
      }
    }
  }
  // best[x]: heaviest antichain weight inside tp above x, absolute levels of t.
  std::map<BinaryString, Rational> best;
  std::map<BinaryString, bool> take_self;
  std::map<BinaryString, std::size_t> level;
  for (const auto& x : members) level[x] = level_of(t, x);
  for (auto it = members.rbegin(); it != members.rend(); ++it) {
    const auto& x = *it;
    const Rational self = pow2_inverse(level[x]);
    Rational below = 0;
    for (const auto& c : children[x]) below += best[c];
    take_self[x] = self >= below;
    best[x] = take_self[x] ? self : below;
  }
  for (const auto& tau : members) {
    Rational scaled = best[tau] * Rational(boost::multiprecision::cpp_int(1) << level[tau]);
    if (scaled <= 1) continue;
    ThinViolation v{tau, {}, scaled};
    std::vector<BinaryString> todo{tau};
    while (!todo.empty()) {
      auto x = todo.back();
      todo.pop_back();
      if (take_self[x]) {
        v.antichain.push_back(x);
      } else {
        for (const auto& c : children[x]) todo.push_back(c);
      }
    }
    std::sort(v.antichain.begin(), v.antichain.end());
    return v;
  }
  return std::nullopt;
}

bool is_thin(const FiniteTree& t, const FiniteTree& tp) { return !thin_violation(t, tp).has_value(); }

FiniteTree hat_level_tree(const FunctionalTable& psi, std::size_t max_len) {
  FiniteTree out;
  out.insert(BinaryString{});
  std::map<BinaryString, std::size_t> hat_len;
  hat_len[BinaryString{}] = hat_output(psi, BinaryString{}).size();
  for (std::size_t len = 1; len <= max_len; ++len) {
    for (const auto& tau : strings_of_length(len)) {
      const auto h = hat_output(psi, tau).size();
      hat_len[tau] = h;
      if (h > hat_len.at(tau.parent())) out.insert(tau);
    }
  }
  return out;
}

TraceSystem trace_from_thin(const FunctionalTable& psi, const FiniteTree& level_tree, const FiniteTree& tp) {
  if (auto v = thin_violation(level_tree, tp)) {
    throw Error(ErrorKind::domain, "subset is not thin above " + v->tau.token());
  }
  TraceSystem ts;
  std::size_t top = 0;
  for (const auto& tau : tp) {
    const auto lev = level_of(level_tree, tau);
    top = std::max(top, lev);
    if (lev == 0) continue;
    auto v = hat_eval(psi, tau, lev - 1);
    if (!v) throw Error(ErrorKind::internal, "level " + std::to_string(lev) + " member " + tau.token() + " lacks a value");
    ts.w[lev - 1].insert(*v);
  }
  for (std::size_t n = 0; n < top; ++n) {
    ts.p.push_back(checked_pow(2, n + 1));
    ts.w[n];
  }
  if (auto c = check_trace_sizes(ts); !c.ok) throw Error(ErrorKind::internal, c.witness);
  return ts;
}

BinaryString selfdelim_prefix(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::domain, "binary notation of 0 is not self-delimited");
  const auto bits = code_to_bits(n);
  std::string out;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    out.push_back(bits[k]);
    out.push_back(k + 1 == bits.size() ? '1' : '0');
  }
  return BinaryString(out);
}

BinaryString selfdelim_encode(std::uint64_t n, std::uint64_t m) {
  if (m == 0) throw Error(ErrorKind::domain, "position 0 has no binary notation");
  return selfdelim_prefix(n) + BinaryString(code_to_bits(m));
}

std::pair<std::uint64_t, std::uint64_t> selfdelim_decode(const BinaryString& code) {
  const auto bits = code.bits();
  std::size_t pos = 0;
  auto n = read_block(bits, pos);
  if (!n) throw Error(ErrorKind::format, "no terminated number prefix in " + code.token());
  const auto rest = bits.substr(pos);
  if (rest.empty() || rest[0] != '1' || rest.size() > 64) {
    throw Error(ErrorKind::format, "position part of " + code.token() + " is not a binary numeral");
  }
  return {*n, bits_to_code(rest)};
}

std::uint64_t tuple_code(const std::vector<std::uint64_t>& values) {
  std::string bits = "1";
  for (auto v : values) {
    if (v == UINT64_MAX) throw Error(ErrorKind::resource, "tuple value too large");
    bits += selfdelim_prefix(v + 1).bits();
  }
  if (bits.size() > 63) throw Error(ErrorKind::resource, "tuple code longer than 63 bits");
  return bits_to_code(bits);
}

std::optional<std::vector<std::uint64_t>> tuple_decode(std::uint64_t code) {
  const auto bits = code_to_bits(code);
  if (bits.empty()) return std::nullopt;
  std::vector<std::uint64_t> out;
  std::size_t pos = 1;
  while (pos < bits.size()) {
    auto v = read_block(bits, pos);
    if (!v) return std::nullopt;
    out.push_back(*v - 1);
  }
  return out;
}

std::uint64_t string_code(const BinaryString& sigma) {
  if (sigma.size() > 62) throw Error(ErrorKind::resource, "string too long to code");
  return bits_to_code("1" + sigma.bits());
}

std::optional<BinaryString> string_decode(std::uint64_t code) {
  if (code == 0) return std::nullopt;
  return BinaryString(code_to_bits(code).substr(1));
}

std::vector<std::uint64_t> normalize_bound(const std::vector<std::uint64_t>& p) {
  bool strict = true;
  for (std::size_t n = 0; n + 1 < p.size(); ++n) {
    if (p[n + 1] < p[n]) {
      throw Error(ErrorKind::normalization, "bound decreases at " + std::to_string(n + 1));
    }
    if (p[n + 1] == p[n]) strict = false;
  }
  std::vector<std::uint64_t> out = p;
  if (!strict) {
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += n;
  }
  if (!out.empty()) out[0] = 0;
  return out;
}

std::optional<std::size_t> k_of(const std::vector<std::uint64_t>& p, std::size_t n) {
  if (p.empty() || p[0] > n) return std::nullopt;
  for (std::size_t m = 0; m + 1 < p.size(); ++m) {
    if (p[m + 1] > n) return m;
  }
  return std::nullopt;
}

std::optional<std::size_t> kprime_of(const std::vector<std::uint64_t>& p, std::size_t n) {
  // k(m) > n exactly when p(n+1) <= m.
  if (n + 1 >= p.size()) return std::nullopt;
  return static_cast<std::size_t>(p[n + 1]);
}

std::vector<std::uint64_t> lift_function(const std::vector<std::uint64_t>& f, const std::vector<std::uint64_t>& p) {
  const auto q = normalize_bound(p);
  std::vector<std::uint64_t> out;
  for (std::size_t m = 0;; ++m) {
    auto kp = kprime_of(q, m);
    if (!kp || *kp > f.size()) break;
    out.push_back(tuple_code(std::vector<std::uint64_t>(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(*kp))));
  }
  return out;
}

TraceSystem rescale_trace(const TraceSystem& ts) {
  if (auto c = check_trace_sizes(ts); !c.ok) throw Error(ErrorKind::domain, "input trace " + c.witness);
  const auto p = normalize_bound(ts.p);
  TraceSystem out;
  for (std::size_t n = 0;; ++n) {
    auto k = k_of(p, n);
    if (!k) break;
    out.p.push_back(n);
    auto& dest = out.w[n];
    if (*k == 0) continue;  // p(0) = 0 admits no values
    auto it = ts.w.find(*k);
    if (it == ts.w.end()) continue;
    for (auto code : it->second) {
      auto tuple = tuple_decode(code);
      if (tuple && tuple->size() > n) dest.insert((*tuple)[n]);
    }
  }
  return out;
}

std::size_t spaced_level(std::size_t n) { return n * (n + 1); }

FiniteTree thin_from_trace(const StagedTree& t, const TraceSystem& ts) {
  const auto tree = union_of_stages(t);
  FiniteTree out;
  out.insert(BinaryString{});
  for (const auto& [n, codes] : ts.w) {
    if (codes.size() > n) {
      throw Error(ErrorKind::precondition, "|w[" + std::to_string(n) + "]| exceeds " + std::to_string(n));
    }
    for (auto code : codes) {
      auto sigma = string_decode(code);
      if (!sigma || !tree.contains(*sigma) || level_of(tree, *sigma) != spaced_level(n)) {
        throw Error(ErrorKind::format, "code " + std::to_string(code) + " in w[" + std::to_string(n) +
                                           "] names no string of spaced level " + std::to_string(n));
      }
      out.insert(*sigma);
    }
  }
  if (auto v = thin_violation(tree, out)) {
    throw Error(ErrorKind::internal, "output is not thin above " + v->tau.token());
  }
  return out;
}

Rational spaced_bound_partial_sum(std::size_t n, std::size_t terms) {
  Rational sum = 0;
  for (std::size_t i = 1; i <= terms; ++i) sum += Rational(n + i) * pow2_inverse(2 * (n + i));
  return sum;
}

TraceSystem dnr_trace(const std::vector<FunctionalTable>& adv) {
  TraceSystem ts;
  for (std::size_t n = 0; n < adv.size(); ++n) {
    ts.p.push_back(1);
    auto& dest = ts.w[n];
    if (auto v = eval(adv[n], BinaryString{}, n)) dest.insert(*v);
  }
  return ts;
}

FunctionalTable level_prefix_functional(const FiniteTree& t) {
  FunctionalTable psi;
  for (const auto& tau : t) {
    const auto n = level_of(t, tau);
    for (std::size_t k = 0; k < n; ++k) {
      psi.try_add({tau, k, static_cast<std::uint64_t>(tau[k]), 1});
    }
  }
  return psi;
}

SplitThinResult splitting_to_thin(const StagedTree& t, const FiniteTree& split_sub) {
  const auto tree = union_of_stages(t);
  if (!split_sub.is_subset_of(tree)) throw Error(ErrorKind::precondition, "subset is not contained in the tree");
  if (!split_sub.contains(BinaryString{})) throw Error(ErrorKind::precondition, "subset lacks e");
  SplitThinResult r;
  r.psi = level_prefix_functional(tree);
  r.witness = splitting_violation(r.psi, split_sub, false, Outputs::plain);
  if (r.witness) return r;
  r.violation = thin_violation(tree, split_sub);
  r.thin_ok = !r.violation.has_value();
  return r;
}

BoundedTrace trace_from_bounded_splitting(const FunctionalTable& psi, const FiniteTree& t, std::uint64_t m) {
  if (t.empty()) throw Error(ErrorKind::empty_input, "empty tree");
  if (branching_stats(t).max_succ > m) throw Error(ErrorKind::precondition, "branching exceeds " + std::to_string(m));
  BoundedTrace out;
  std::size_t top = 0;
  for (const auto& tau : t) {
    const auto lev = level_of(t, tau);
    top = std::max(top, lev);
    if (lev == 0) continue;
    auto& dest = out.trace.w[lev - 1];
    if (auto v = hat_eval(psi, tau, lev - 1)) dest.insert(*v);
  }
  for (std::size_t n = 0; n < top; ++n) {
    out.trace.p.push_back(checked_pow(m, n + 1));
    out.level_n_bound.push_back(checked_pow(m, n));
  }
  return out;
}

std::uint64_t majorizer_from_perfect(const FunctionalTable& psi, const FiniteTree& t, std::size_t n) {
  const auto upto = truncate_to_level(t, n + 1);
  for (const auto& tau : upto) {
    if (level_of(upto, tau) <= n && successors_in(upto, tau).size() != 2) {
      throw Error(ErrorKind::precondition, "tree is not perfect below " + tau.token());
    }
  }
  if (auto bad = splitting_violation(psi, upto, false, Outputs::hat)) {
    throw Error(ErrorKind::precondition, bad->first.token() + " and " + bad->second.token() + " do not hat-split");
  }
  std::optional<std::uint64_t> best;
  for (const auto& tau : members_of_level(upto, n + 1)) {
    if (auto v = hat_eval(psi, tau, n)) best = std::max(best.value_or(0), *v);
  }
  if (!best) throw Error(ErrorKind::domain, "undefined majorizer at " + std::to_string(n));
  return *best;
}

StagedTree random_weak_tree(std::mt19937_64& rng, std::size_t max_len, std::size_t stages) {
  StagedTree st;
  FiniteTree cur;
  cur.insert(BinaryString{});
  st.stages.push_back(cur);
  for (std::size_t s = 1; s < stages; ++s) {
    std::vector<BinaryString> open;
    for (const auto& x : cur) {
      if (x.size() < max_len) open.push_back(x);
    }
    for (int attempt = 0; attempt < 8 && !open.empty(); ++attempt) {
      const auto& rho = open[rng() % open.size()];
      const auto room = std::min<std::size_t>(3, max_len - rho.size());
      const auto ext = 1 + rng() % room;
      const auto sigma = rho + BinaryString::from_uint(rng(), ext);
      bool ok = !cur.contains(sigma);
      for (const auto& x : cur) {
        if (ok && sigma.is_proper_prefix_of(x)) ok = false;
      }
      if (ok) {
        cur.insert(sigma);
        break;
      }
    }
    st.stages.push_back(cur);
  }
  return st;
}

}  // namespace pi01
