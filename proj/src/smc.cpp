#include "pi01/smc.hpp"

#include <algorithm>
#include <sstream>

#include "pi01/error.hpp"

namespace pi01 {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_pair(std::uint64_t seed, const BinaryString& a, const BinaryString& b) {
  std::uint64_t h = mix(seed);
  for (std::size_t k = 0; k < a.size(); ++k) h = mix(h ^ (2 + a[k]));
  h = mix(h ^ 0x51);
  for (std::size_t k = 0; k < b.size(); ++k) h = mix(h ^ (2 + b[k]));
  return h;
}

BinaryString zeros(std::size_t n) { return BinaryString(std::string(n, '0')); }

// Level structure of a finite tree, members in length-lex order per level.
struct LevelInfo {
  std::map<BinaryString, std::size_t> level;
  std::map<BinaryString, std::size_t> children;
  std::vector<std::vector<BinaryString>> by_level;
};

LevelInfo analyze(const FiniteTree& t) {
  LevelInfo info;
  for (const auto& x : t.sorted()) {
    std::optional<BinaryString> parent;
    for (std::size_t k = x.size(); k-- > 0;) {
      auto pre = x.prefix(k);
      if (t.contains(pre)) {
        parent = std::move(pre);
        break;
      }
    }
    const std::size_t lev = parent ? info.level.at(*parent) + 1 : 0;
    if (parent) ++info.children[*parent];
    info.level[x] = lev;
    info.children.emplace(x, 0);
    if (info.by_level.size() <= lev) info.by_level.resize(lev + 1);
    info.by_level[lev].push_back(x);
  }
  return info;
}

std::size_t max_length(const std::vector<BinaryString>& v) {
  std::size_t m = 0;
  for (const auto& x : v) m = std::max(m, x.size());
  return m;
}

std::size_t min_length(const std::vector<BinaryString>& v) {
  std::size_t m = SIZE_MAX;
  for (const auto& x : v) m = std::min(m, x.size());
  return m;
}

bool omega_from(const LevelInfo& info, const std::vector<std::uint64_t>& f, std::size_t n) {
  if (n == 0) return true;
  if (n >= info.by_level.size() || n >= f.size()) return false;
  for (std::size_t lev = 0; lev < n; ++lev) {
    for (const auto& x : info.by_level[lev]) {
      if (info.children.at(x) != 2) return false;
    }
  }
  for (std::size_t k = 0; k <= n; ++k) {
    if (max_length(info.by_level[k]) > f[k]) return false;
  }
  return true;
}

std::size_t omega_level_from(const LevelInfo& info, const std::vector<std::uint64_t>& f) {
  std::size_t n = 0;
  while (omega_from(info, f, n + 1)) ++n;
  return n;
}

// Value-1 axioms of phi indexed by oracle string, for repeated T(tau) queries.
class TreeOracle {
 public:
  TreeOracle(const FunctionalTable& phi, bool cache) : cache_(cache) {
    for (const auto& a : phi.axioms()) {
      if (a.value == 1) by_sigma_[a.sigma].push_back({a.arg, a.steps});
    }
  }

  FiniteTree tree(const BinaryString& tau) const {
    FiniteTree t;
    t.insert(BinaryString{});
    for (std::size_t k = 0; k <= tau.size(); ++k) {
      auto hit = by_sigma_.find(tau.prefix(k));
      if (hit == by_sigma_.end()) continue;
      for (const auto& [arg, steps] : hit->second) {
        if (steps <= tau.size()) t.insert(rank_to_string(arg));
      }
    }
    return t;
  }

  const LevelInfo& info(const BinaryString& tau) {
    auto it = info_cache_.find(tau);
    if (it != info_cache_.end()) return it->second;
    if (!cache_) info_cache_.clear();
    return info_cache_.emplace(tau, analyze(tree(tau))).first->second;
  }

 private:
  bool cache_;
  std::map<BinaryString, std::vector<std::pair<std::uint64_t, std::uint64_t>>> by_sigma_;
  std::map<BinaryString, LevelInfo> info_cache_;
};

std::string join_tokens(const std::vector<BinaryString>& v) {
  std::string out;
  for (const auto& x : v) out += (out.empty() ? "" : ",") + x.token();
  return out;
}

std::size_t relative_level(std::size_t tau_pi_level, const LambdaNode& node) {
  if (node.pi_level <= tau_pi_level) {
    throw Error(ErrorKind::precondition, node.tau.token() + " is not above the base level in Pi");
  }
  return node.pi_level - tau_pi_level;
}

Rational pow2_inverse(std::size_t k) { return Rational(1, boost::multiprecision::cpp_int(1) << k); }

}  // namespace

std::uint64_t string_rank(const BinaryString& sigma) {
  if (sigma.size() > 62) throw Error(ErrorKind::resource, "string too long to rank");
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < sigma.size(); ++k) v = (v << 1) | static_cast<std::uint64_t>(sigma[k]);
  return (std::uint64_t{1} << sigma.size()) - 1 + v;
}

BinaryString rank_to_string(std::uint64_t rank) {
  std::size_t len = 0;
  while (len < 63 && (std::uint64_t{1} << (len + 1)) - 1 <= rank) ++len;
  return BinaryString::from_uint(rank - ((std::uint64_t{1} << len) - 1), len);
}

FiniteTree tree_at(const FunctionalTable& phi, const BinaryString& tau) {
  return TreeOracle(phi, false).tree(tau);
}

Validation validate_context(const OmegaContext& ctx, std::size_t max_len) {
  for (std::size_t k = 0; k + 1 < ctx.f.size(); ++k) {
    if (ctx.f[k + 1] <= ctx.f[k]) return Validation::fail("f is not strictly increasing at " + std::to_string(k + 1));
  }
  TreeOracle oracle(ctx.phi, false);
  for (std::size_t len = 0; len <= max_len; ++len) {
    for (const auto& tau : strings_of_length(len)) {
      const auto& info = oracle.info(tau);
      if (info.by_level[0].size() != 1) return Validation::fail("T(" + tau.token() + ") has several roots");
      for (const auto& [x, c] : info.children) {
        if (c > 2) return Validation::fail(x.token() + " has " + std::to_string(c) + " successors in T(" + tau.token() + ")");
      }
    }
  }
  return Validation::pass();
}

bool is_a_oplus_compatible(const BinaryString& tau, const BinaryString& a_prefix) {
  if (tau.size() > 2 * a_prefix.size()) {
    throw Error(ErrorKind::precondition, "oracle prefix of length " + std::to_string(a_prefix.size()) +
                                             " is too short for " + tau.token());
  }
  for (std::size_t n = 0; 2 * n < tau.size(); ++n) {
    if (tau[2 * n] != a_prefix[n]) return false;
  }
  return true;
}

FiniteTree a_oplus_tree(const BinaryString& a_prefix, std::size_t depth) {
  if (depth > a_prefix.size()) throw Error(ErrorKind::precondition, "oracle prefix shorter than the depth");
  if (depth > 12) throw Error(ErrorKind::resource, "depth above 12");
  FiniteTree t;
  std::vector<BinaryString> layer{BinaryString{}};
  t.insert(BinaryString{});
  for (std::size_t n = 0; n < depth; ++n) {
    std::vector<BinaryString> next;
    for (const auto& x : layer) {
      for (int b = 0; b < 2; ++b) next.push_back(x.child(a_prefix[n]).child(b));
    }
    for (const auto& x : next) t.insert(x);
    layer = std::move(next);
  }
  return t;
}

std::vector<std::uint64_t> level_length_profile(const FunctionalTable& phi, const BinaryString& a_prefix,
                                                std::size_t depth) {
  const auto info = analyze(tree_at(phi, a_prefix));
  if (info.by_level.size() <= depth) {
    throw Error(ErrorKind::depth, "T(" + a_prefix.token() + ") reaches level " + std::to_string(info.by_level.size() - 1) +
                                      " < " + std::to_string(depth));
  }
  std::vector<std::uint64_t> g;
  for (std::size_t n = 0; n <= depth; ++n) g.push_back(max_length(info.by_level[n]));
  return g;
}

std::vector<std::uint64_t> majorant_from_g(const std::vector<std::uint64_t>& g) {
  std::vector<std::uint64_t> f;
  std::uint64_t best = 0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    best = std::max(best, g[n]);
    f.push_back(best + n);
  }
  return f;
}

std::vector<std::uint64_t> compute_majorant(const FunctionalTable& phi, const BinaryString& a_prefix, std::size_t depth) {
  return majorant_from_g(level_length_profile(phi, a_prefix, depth));
}

std::vector<std::uint64_t> tight_majorant(const FunctionalTable& phi, const BinaryString& a_prefix, std::size_t depth) {
  auto f = level_length_profile(phi, a_prefix, depth);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = std::max(f[n] + 1, n == 0 ? 0 : f[n - 1] + 1);
  return f;
}

bool omega(const OmegaContext& ctx, const BinaryString& tau, std::size_t n) {
  return omega_from(analyze(tree_at(ctx.phi, tau)), ctx.f, n);
}

std::size_t omega_level(const OmegaContext& ctx, const BinaryString& tau) {
  return omega_level_from(analyze(tree_at(ctx.phi, tau)), ctx.f);
}

StagedTree enumerate_pi(const OmegaContext& ctx, std::size_t max_stage) {
  if (max_stage > 16) throw Error(ErrorKind::resource, "Pi enumeration limited to 16 stages");
  TreeOracle oracle(ctx.phi, false);
  std::map<BinaryString, std::size_t> level_of_member;
  level_of_member[BinaryString{}] = omega_level_from(oracle.info(BinaryString{}), ctx.f);
  StagedTree st;
  FiniteTree cur;
  cur.insert(BinaryString{});
  st.stages.push_back(cur);
  for (std::size_t s = 1; s <= max_stage; ++s) {
    FiniteTree next = cur;
    for (const auto& tau : strings_of_length(s)) {
      std::size_t n = 0;
      for (std::size_t k = 0; k < s; ++k) {
        auto it = level_of_member.find(tau.prefix(k));
        if (it != level_of_member.end()) n = std::max(n, it->second);
      }
      if (n + 2 >= ctx.f.size()) continue;
      const auto& info = oracle.info(tau);
      const auto top = omega_level_from(info, ctx.f);
      for (std::size_t np = n + 2; np <= top; ++np) {
        if (min_length(info.by_level[np]) >= ctx.f[n + 2]) {
          next.insert(tau);
          level_of_member[tau] = top;
          break;
        }
      }
    }
    cur = std::move(next);
    st.stages.push_back(cur);
  }
  return st;
}

std::vector<Rational> lambda_weights(std::size_t tau_pi_level, const std::vector<LambdaNode>& lambda) {
  std::size_t top = 0;
  for (const auto& node : lambda) top = std::max(top, relative_level(tau_pi_level, node));
  std::vector<std::size_t> count(top + 1, 0);
  for (const auto& node : lambda) ++count[relative_level(tau_pi_level, node)];
  std::vector<Rational> r;
  Rational sum = 0;
  for (std::size_t m = 1; m <= top; ++m) {
    sum += Rational(count[m]) * pow2_inverse(m);
    r.push_back(sum);
  }
  return r;
}

SelectionResult select_extensions(const OmegaContext& ctx, const BinaryString& tau, std::size_t tau_pi_level,
                                  const std::vector<LambdaNode>& lambda, const BinaryString& sigma) {
  for (std::size_t a = 0; a < lambda.size(); ++a) {
    if (!tau.is_proper_prefix_of(lambda[a].tau)) {
      throw Error(ErrorKind::precondition, lambda[a].tau.token() + " does not extend " + tau.token());
    }
    for (std::size_t b = a + 1; b < lambda.size(); ++b) {
      if (lambda[a].tau.compatible_with(lambda[b].tau)) throw Error(ErrorKind::precondition, "nodes are not prefix-free");
    }
  }
  const auto r = lambda_weights(tau_pi_level, lambda);
  for (std::size_t m = 0; m < r.size(); ++m) {
    if (r[m] > 1) throw Error(ErrorKind::validation, "thinness violated: r_" + std::to_string(m + 1) + " = " + r[m].str());
  }

  TreeOracle oracle(ctx.phi, true);
  SelectionResult res;
  const auto& base = oracle.info(tau);
  res.n_tau = omega_level_from(base, ctx.f);
  if (!base.level.count(sigma) || base.level.at(sigma) != res.n_tau) {
    throw Error(ErrorKind::precondition, sigma.token() + " is not of level " + std::to_string(res.n_tau) + " in T(" +
                                             tau.token() + ")");
  }
  std::vector<std::size_t> rel;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const auto& info = oracle.info(lambda[i].tau);
    res.n_i.push_back(omega_level_from(info, ctx.f));
    rel.push_back(relative_level(tau_pi_level, lambda[i]));
    if (!info.level.count(sigma) || info.level.at(sigma) != res.n_tau) {
      throw Error(ErrorKind::validation, sigma.token() + " changes level in T(" + lambda[i].tau.token() + ")");
    }
    if (res.n_i[i] < res.n_tau + 2 * rel[i]) {
      throw Error(ErrorKind::validation, "Omega level of " + lambda[i].tau.token() + " is below n_tau + 2m");
    }
  }

  std::map<std::size_t, std::vector<BinaryString>> pools;
  for (std::size_t i = 0; i < lambda.size(); ++i) pools[i] = {sigma};

  auto dump = [&](const std::string& why) {
    std::ostringstream os;
    os << why << "; tau=" << tau.token() << " sigma=" << sigma.token() << " n_tau=" << res.n_tau;
    for (const auto& [i, p] : pools) os << " pool[" << lambda[i].tau.token() << "]={" << join_tokens(p) << "}";
    for (const auto& [i, pr] : res.sigma_pairs) {
      os << " sel[" << lambda[i].tau.token() << "]=" << pr.first.token() << "," << pr.second.token();
    }
    return os.str();
  };

  for (std::size_t m = 1; m <= r.size(); ++m) {
    const auto target = res.n_tau + 2 * m;
    for (auto& [i, pool] : pools) {
      const auto& info = oracle.info(lambda[i].tau);
      std::vector<BinaryString> next;
      for (const auto& psi : pool) {
        std::size_t found = 0;
        for (const auto& x : info.by_level[target]) {
          if (psi.is_proper_prefix_of(x)) {
            next.push_back(x);
            ++found;
          }
        }
        if (found != 4) {
          throw Error(ErrorKind::validation, psi.token() + " has " + std::to_string(found) + " extensions of level " +
                                                 std::to_string(target) + " in T(" + lambda[i].tau.token() + ")");
        }
      }
      std::sort(next.begin(), next.end());
      pool = std::move(next);
    }
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (rel[i] != m) continue;
      const auto& info = oracle.info(lambda[i].tau);
      BinaryString chosen[2];
      for (int j = 0; j < 2; ++j) {
        std::optional<BinaryString> pick;
        for (const auto& x : info.by_level[res.n_i[i]]) {
          const auto& pool = pools.at(i);
          if (std::any_of(pool.begin(), pool.end(), [&](const BinaryString& p) { return p.is_prefix_of(x); })) {
            pick = x;
            break;
          }
        }
        if (!pick) throw Error(ErrorKind::internal, dump("no candidate left for " + lambda[i].tau.token()));
        chosen[j] = *pick;
        for (auto& [k, pool] : pools) {
          std::erase_if(pool, [&](const BinaryString& p) { return p.compatible_with(*pick); });
        }
      }
      res.sigma_pairs[i] = {chosen[0], chosen[1]};
    }
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (rel[i] == m) pools.erase(i);
    }
    SelectionStep step;
    step.m = m;
    step.r = r[m - 1];
    step.floor = (1 - step.r) * Rational(boost::multiprecision::cpp_int(1) << (m + 1));
    step.pools = pools;
    for (const auto& [i, pool] : pools) {
      if (Rational(pool.size()) < step.floor) throw Error(ErrorKind::internal, dump("pool below its floor"));
    }
    res.steps.push_back(std::move(step));
  }
  return res;
}

Validation check_theta(const ThetaAxioms& theta) {
  std::map<std::size_t, std::vector<BinaryString>> by_stage;
  for (const auto& [s, v] : theta.axioms) {
    auto it = theta.stage.find(s);
    if (it == theta.stage.end()) return Validation::fail("axiom at " + s.token() + " has no stage");
    by_stage[it->second].push_back(s);
  }
  for (const auto& [stage, dom] : by_stage) {
    if (!is_prefix_free(std::span<const BinaryString>(dom))) {
      return Validation::fail("stage " + std::to_string(stage) + " domain is not prefix-free");
    }
  }
  for (const auto& [a, va] : theta.axioms) {
    for (const auto& [b, vb] : theta.axioms) {
      if (a.is_proper_prefix_of(b) && !va.is_prefix_of(vb)) {
        return Validation::fail("Theta(" + a.token() + ")=" + va.token() + " but Theta(" + b.token() + ")=" + vb.token());
      }
    }
  }
  return Validation::pass();
}

std::vector<BinaryString> theta_chain(const ThetaAxioms& theta, const BinaryString& leaf) {
  std::vector<BinaryString> out;
  for (std::size_t k = 0; k <= leaf.size(); ++k) {
    auto it = theta.axioms.find(leaf.prefix(k));
    if (it != theta.axioms.end()) out.push_back(it->second);
  }
  return out;
}

Validation validate_pistar(const PiStarStaging& ps, const FiniteTree& pi) {
  if (ps.stages.stages.empty() || !(ps.stages.stages.front() == FiniteTree{BinaryString{}})) {
    return Validation::fail("Pi*_0 != {e}");
  }
  const auto& stages = ps.stages.stages;
  for (std::size_t s = 0; s + 1 < stages.size(); ++s) {
    const auto& cur = stages[s];
    const auto& next = stages[s + 1];
    if (!cur.is_subset_of(next)) return Validation::fail("stage " + std::to_string(s + 1) + " drops a member");
    std::vector<BinaryString> added;
    for (const auto& x : next) {
      if (!cur.contains(x)) added.push_back(x);
    }
    if (!is_prefix_free(std::span<const BinaryString>(added))) {
      return Validation::fail("stage " + std::to_string(s + 1) + " adds compatible strings");
    }
    std::optional<BinaryString> leaf;
    for (const auto& x : added) {
      std::optional<BinaryString> own;
      for (const auto& l : leaves(cur)) {
        if (l.is_proper_prefix_of(x)) own = l;
      }
      if (!own) return Validation::fail(x.token() + " extends no leaf of stage " + std::to_string(s));
      if (leaf && *leaf != *own) return Validation::fail("stage " + std::to_string(s + 1) + " extends two leaves");
      leaf = own;
    }
  }
  const auto& fin = stages.back();
  if (!fin.is_subset_of(pi)) return Validation::fail("Pi* is not contained in Pi");
  for (const auto& x : fin) {
    auto succ = successors_in(fin, x);
    std::set<BinaryString> have(succ.begin(), succ.end());
    auto it = ps.succ_codes.find(x);
    const std::set<BinaryString> coded = it == ps.succ_codes.end() ? std::set<BinaryString>{} : it->second;
    if (have != coded) return Validation::fail("successor code of " + x.token() + " does not match the stages");
  }
  for (const auto& [x, codes] : ps.succ_codes) {
    if (!fin.contains(x)) return Validation::fail("code for non-member " + x.token());
  }
  return Validation::pass();
}

TPrimeResult build_tprime(const OmegaContext& ctx, const FiniteTree& pi, const PiStarStaging& ps) {
  if (auto v = validate_pistar(ps, pi); !v.ok) throw Error(ErrorKind::validation, v.witness);
  TPrimeResult res;
  res.tprime[BinaryString{}] = FiniteTree{BinaryString{}};
  const auto& stages = ps.stages.stages;
  for (std::size_t s = 0; s + 1 < stages.size(); ++s) {
    const auto& cur = stages[s];
    std::vector<BinaryString> added;
    for (const auto& x : stages[s + 1]) {
      if (!cur.contains(x)) added.push_back(x);
    }
    if (added.empty()) continue;
    BinaryString tau;
    for (const auto& l : leaves(cur)) {
      if (l.is_proper_prefix_of(added.front())) tau = l;
    }
    const auto m = level_of(cur, tau);
    std::vector<LambdaNode> lambda;
    for (const auto& x : added) lambda.push_back({x, level_of(pi, x)});
    const auto base = res.tprime.at(tau);
    for (const auto& x : added) res.tprime[x] = base;
    for (const auto& sigma : members_of_level(base, m)) {
      const auto sel = select_extensions(ctx, tau, level_of(pi, tau), lambda, sigma);
      for (const auto& [i, pr] : sel.sigma_pairs) {
        for (const auto& leaf : {pr.first, pr.second}) {
          res.tprime[added[i]].insert(leaf);
          res.theta.axioms[leaf] = added[i];
          res.theta.stage[leaf] = s + 1;
        }
      }
    }
  }
  return res;
}

PiStarStaging stage_pistar_along(const OmegaContext& ctx, const FiniteTree& pi, std::mt19937_64& rng,
                                 std::size_t max_stages, std::size_t max_succ) {
  PiStarStaging ps;
  FiniteTree cur{BinaryString{}};
  ps.stages.stages.push_back(cur);
  BinaryString leaf;
  for (std::size_t stage = 0; stage < max_stages; ++stage) {
    const auto base = level_of(pi, leaf);
    std::optional<BinaryString> path;
    std::vector<BinaryString> others;
    for (const auto& x : pi.sorted()) {
      if (!leaf.is_proper_prefix_of(x)) continue;
      const auto lev = level_of(pi, x);
      if (lev == base + 1 && !path && x.compatible_with(ctx.a_prefix)) {
        path = x;
      } else if (lev <= base + 3) {
        others.push_back(x);
      }
    }
    if (!path) break;
    std::vector<LambdaNode> chosen{{*path, base + 1}};
    std::shuffle(others.begin(), others.end(), rng);
    for (const auto& x : others) {
      if (chosen.size() >= max_succ) break;
      bool free = std::none_of(chosen.begin(), chosen.end(), [&](const LambdaNode& c) { return c.tau.compatible_with(x); });
      if (!free) continue;
      auto trial = chosen;
      trial.push_back({x, level_of(pi, x)});
      const auto r = lambda_weights(base, trial);
      if (std::all_of(r.begin(), r.end(), [](const Rational& v) { return v <= 1; })) chosen = std::move(trial);
    }
    auto& codes = ps.succ_codes[leaf];
    for (const auto& c : chosen) {
      cur.insert(c.tau);
      codes.insert(c.tau);
    }
    ps.stages.stages.push_back(cur);
    leaf = *path;
  }
  return ps;
}

OmegaContext generate_smc_context(const SmcScenarioParams& params) {
  if (params.oracle_len > 8 || params.depth_cap > 14) throw Error(ErrorKind::resource, "scenario too large");
  auto decided = [&](const BinaryString& rho) {
    std::size_t d = 0;
    for (std::size_t k = 0; k < rho.size(); ++k) d += 1 + rho[k];
    return std::min(d, params.depth_cap);
  };
  OmegaContext ctx;
  for (std::size_t len = 1; len <= params.oracle_len; ++len) {
    for (const auto& rho : strings_of_length(len)) {
      const auto depth = decided(rho);
      const auto before = decided(rho.parent());
      if (depth == before) continue;
      // Grow the hashed tree up to the decided depth, recording members first decided by rho.
      std::vector<BinaryString> frontier{BinaryString{}};
      while (!frontier.empty()) {
        std::vector<BinaryString> next;
        for (const auto& sigma : frontier) {
          if (sigma.size() >= depth) continue;
          std::size_t k = 0;
          while (decided(rho.prefix(k)) < sigma.size() + 1) ++k;
          const auto h = hash_pair(params.seed, sigma, rho.prefix(k));
          std::vector<BinaryString> kids;
          if (h % 1000 < params.long_edge_permille) {
            static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
            const auto& pr = pairs[(h >> 10) % 6];
            for (int e : pr) kids.push_back(sigma + BinaryString::from_uint(static_cast<std::uint64_t>(e), 2));
          } else {
            kids = {sigma.child(0), sigma.child(1)};
          }
          for (auto& kid : kids) {
            if (kid.size() > depth) continue;
            if (kid.size() > before) ctx.phi.add({rho, string_rank(kid), 1, len});
            next.push_back(std::move(kid));
          }
        }
        frontier = std::move(next);
      }
    }
  }
  std::mt19937_64 rng(mix(params.seed ^ 0xa5));
  ctx.a_prefix = BinaryString::from_uint(rng(), params.oracle_len);
  const auto info = analyze(tree_at(ctx.phi, ctx.a_prefix));
  const auto depth = info.by_level.size() - 1;
  ctx.f = params.tight ? tight_majorant(ctx.phi, ctx.a_prefix, depth) : compute_majorant(ctx.phi, ctx.a_prefix, depth);
  return ctx;
}

FunctionalTable hat_normalize(const FunctionalTable& psi, const FiniteTree& t) {
  FunctionalTable out;
  std::set<BinaryString> done;
  for (const auto& x : t) {
    for (std::size_t k = 0; k <= x.size(); ++k) {
      const auto y = x.prefix(k);
      if (!done.insert(y).second) continue;
      const auto h = hat_output(psi, y);
      for (std::size_t n = 0; n < h.size(); ++n) out.add({y, n, h[n], 1});
    }
  }
  return out;
}

const char* to_string(DriverBranch b) {
  return b == DriverBranch::no_splittings ? "no-splittings" : "splitting-subtree";
}

FiniteTree dagger_subtree(const FiniteTree& t1, std::size_t budget) {
  const auto roots = members_of_level(t1, 0);
  if (roots.size() != 1) throw Error(ErrorKind::precondition, "tree has no unique root");
  const auto rho0 = roots.front();
  FiniteTree shifted;
  std::size_t top = 0;
  for (const auto& x : t1) {
    shifted.insert(BinaryString(x.bits().substr(rho0.size())));
    top = std::max(top, x.size() - rho0.size());
  }
  if (top > 16 || (std::size_t{1} << top) > budget) {
    throw Error(ErrorKind::resource, "dagger construction needs " + std::to_string(std::size_t{1} << std::min<std::size_t>(top, 63)) +
                                         " work units, budget " + std::to_string(budget));
  }
  OmegaContext ctx;
  for (const auto& x : shifted) {
    if (!x.empty()) ctx.phi.add({zeros(x.size()), string_rank(x), 1, x.size()});
  }
  ctx.a_prefix = zeros(top);
  const auto info = analyze(shifted);
  ctx.f = tight_majorant(ctx.phi, ctx.a_prefix, info.by_level.size() - 1);
  const auto pi = enumerate_pi(ctx, top).final_stage();
  std::mt19937_64 rng(0);
  const auto ps = stage_pistar_along(ctx, pi, rng, top, 1);
  const auto res = build_tprime(ctx, pi, ps);
  BinaryString last;
  for (const auto& x : ps.stages.final_stage()) {
    if (x.size() > last.size()) last = x;
  }
  FiniteTree out;
  for (const auto& x : res.tprime.at(last)) out.insert(rho0 + x);
  return out;
}

DriverResult smc_driver_stage(const DriverState& state, const FunctionalTable& psi, std::size_t dagger_budget,
                              const std::optional<BinaryString>& avoid) {
  if (!is_two_branching(state.t)) throw Error(ErrorKind::precondition, "T_s is not 2-branching");
  if (!state.t.contains(state.b)) throw Error(ErrorKind::precondition, "B_s is not on T_s");
  const auto ph = hat_normalize(psi, state.t);
  std::size_t work = 0;
  auto spend = [&]() {
    if (++work > dagger_budget) throw Error(ErrorKind::resource, "budget of " + std::to_string(dagger_budget) + " exhausted");
  };
  auto splits = [&](const BinaryString& x, const BinaryString& y) {
    spend();
    return !x.compatible_with(y) && outputs_incompatible(output(ph, x), output(ph, y));
  };
  auto avoids = [&](const BinaryString& x) { return !avoid || !x.compatible_with(*avoid); };

  DriverResult res;
  for (const auto& tau : state.t.sorted()) {
    if (!state.b.is_prefix_of(tau) || successors_in(state.t, tau).empty()) continue;
    const auto c = cone(state.t, tau).sorted();
    bool any = false;
    for (std::size_t a = 0; a < c.size() && !any; ++a) {
      for (std::size_t b = a + 1; b < c.size() && !any; ++b) any = splits(c[a], c[b]);
    }
    if (any) continue;
    res.branch = DriverBranch::no_splittings;
    res.tau = tau;
    res.next.t = state.t;
    res.next.b = successors_in(state.t, tau).front();
    for (const auto& x : c) {
      if (x != tau && avoids(x)) {
        res.next.b = x;
        break;
      }
    }
    return res;
  }

  res.branch = DriverBranch::splitting_subtree;
  FiniteTree sub{state.b};
  std::vector<BinaryString> open{state.b};
  while (!open.empty()) {
    const auto x = open.front();
    open.erase(open.begin());
    std::vector<BinaryString> above;
    for (const auto& y : state.t.sorted()) {
      if (x.is_proper_prefix_of(y)) above.push_back(y);
    }
    std::optional<std::pair<BinaryString, BinaryString>> pick;
    for (std::size_t a = 0; a < above.size() && !pick; ++a) {
      for (std::size_t b = a + 1; b < above.size() && !pick; ++b) {
        if (splits(above[a], above[b])) pick = std::make_pair(above[a], above[b]);
      }
    }
    if (!pick) continue;
    sub.insert(pick->first);
    sub.insert(pick->second);
    open.push_back(pick->first);
    open.push_back(pick->second);
  }
  res.splitting_tree = sub;
  res.image = image_tree(ph, sub);
  res.dagger = dagger_subtree(res.image, dagger_budget - work);
  res.next.t = pullback_tree(ph, sub, res.dagger);
  const auto lv = leaves(res.next.t);
  res.next.b = lv.front();
  for (const auto& x : lv) {
    if (avoids(x)) {
      res.next.b = x;
      break;
    }
  }
  return res;
}

}  // namespace pi01
