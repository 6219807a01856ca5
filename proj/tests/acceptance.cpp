// Acceptance run: one PASS/FAIL line per criterion, each backed by the
// library sweeps plus independent test-side recomputation.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pi01/cli.hpp"
#include "pi01/sweeps.hpp"
#include "smc_oracles.hpp"

using namespace pi01;
using boost::multiprecision::cpp_int;

namespace {

constexpr std::uint64_t kSeed = 20261018;
constexpr double kTwocolN2Seconds = 10.0;
constexpr double kTwocolN3Seconds = 30.0;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail.str("");
      detail << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string describe(const SweepResult& r) {
  const auto f = r.first_failure();
  return r.id + " " + std::to_string(r.passed()) + "/" + std::to_string(r.items.size()) +
         (f ? " first failure: " + r.items[*f].witness : "");
}

void require_sweep(Outcome& o, const SweepResult& r, std::size_t min_items) {
  o.require(r.ok() && r.items.size() >= min_items, describe(r));
}

std::set<std::string> raw_leaves(const FiniteTree& t) {
  std::set<std::string> out;
  for (const auto& s : leaves(t)) out.insert(s.bits());
  return out;
}

std::set<std::string> even_source(std::size_t n) {
  std::set<std::string> source;
  for (std::size_t k = 0; k <= n; ++k) {
    for (auto& s : oracle::all_strings(2 * k)) source.insert(s);
  }
  return source;
}

// (d, leaves) is among the brute-force answers: an f-compatible subtree avoiding colour d.
bool oracle_accepts(const std::vector<oracle::Leaves>& candidates, const Coloring& c, std::uint32_t d,
                    const std::set<std::string>& got) {
  if (std::find(candidates.begin(), candidates.end(), got) == candidates.end()) return false;
  return std::none_of(got.begin(), got.end(), [&](const std::string& leaf) {
    const auto& v = c.assignment.at(BinaryString(leaf));
    return v && *v == d;
  });
}

Outcome criterion1() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const auto ex = sweep_twocol_exhaustive(2, Exec::parallel);
  const double t_ex = seconds_since(t0);
  require_sweep(o, ex, 65536);
  o.require(t_ex < kTwocolN2Seconds, "n=2 exhaustive took " + std::to_string(t_ex) + " s");

  t0 = std::chrono::steady_clock::now();
  const auto sampled = sweep_twocol_sampled(3, 10000, kSeed, Exec::parallel);
  const double t_s = seconds_since(t0);
  require_sweep(o, sampled, 10000);
  o.require(t_s < kTwocolN3Seconds, "n=3 sampled took " + std::to_string(t_s) + " s");

  const auto cands = oracle::compatible_leaf_sets(even_source(2), {0, 2, 4}, {2, 2});
  o.require(cands.size() == 216, "oracle candidate count " + std::to_string(cands.size()));
  std::size_t cross = 0;
  for (std::uint64_t idx = 0; idx < 65536; idx += 61) {
    const auto c = twocol_coloring(2, idx);
    const auto e = extract_twocol(2, c);
    o.require(oracle_accepts(cands, c, e.d, raw_leaves(e.sub)), "oracle rejects colouring " + std::to_string(idx));
    ++cross;
  }
  if (o.ok) {
    o.detail << "65536/65536 at n=2 in " << t_ex << " s; 10000/10000 at n=3 in " << t_s << " s; " << cross
             << " brute-force cross-checks";
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::size_t instances = 0;
  for (std::size_t i = 0; i <= 2; ++i) {
    for (std::size_t n = 0; n <= i + 2; ++n) {
      const auto r = sweep_nice_sampled(i, n, 10000, kSeed + i * 10 + n, Exec::parallel);
      require_sweep(o, r, 10000);
      instances += r.items.size();
    }
  }
  o.require(kappa(0, 0) == 4, "kappa(0,0) = " + std::to_string(kappa(0, 0)));
  for (std::size_t i = 0; i <= 6; ++i) {
    for (std::size_t n = i; n <= 10; ++n) {
      const cpp_int closed = cpp_int(1) << (n - i + 2);
      o.require(cpp_int(kappa(i, n)) == closed,
                "kappa(" + std::to_string(i) + "," + std::to_string(n) + ") = " + std::to_string(kappa(i, n)));
    }
  }
  require_sweep(o, sweep_kappa(6, 10), 56);
  if (o.ok) o.detail << instances << " colourings over i<=2, n<=i+2; kappa closed form for i<=6, n<=10";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto corpus = adversary_corpus(kSeed, 120);
  std::size_t empty = 0, crafted = 0, random = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    (corpus[k].psi.empty() ? empty : (k % 3 == 1 ? crafted : random)) += 1;
  }
  o.require(empty >= 1 && crafted >= 1 && random >= 1, "corpus lacks a bundle kind");
  require_sweep(o, sweep_pi_members(corpus, 3, Exec::parallel), 100);
  const auto level1 = pi_star_successors(root_node());
  const auto trees = oracle::compatible_leaf_sets(even_source(1), {0, 2}, {2}).size();
  o.require(level1.size() == 12 && trees * 2 == 12,
            "|level-1 successors| = " + std::to_string(level1.size()) + ", oracle trees " + std::to_string(trees));
  if (o.ok) {
    o.detail << corpus.size() << " bundles (" << empty << " empty, " << crafted << " crafted, " << random
             << " random), n<=3; 12 level-1 successors";
  }
  return o;
}

cpp_int factorial(std::size_t n) {
  cpp_int f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

Outcome criterion4() {
  Outcome o;
  require_sweep(o, sweep_traceable(100, 8, kSeed, Exec::parallel), 100);
  for (std::size_t n = 0; n <= 8; ++n) {
    const cpp_int lhs = 2 * cpp_int(n + 2) * (cpp_int(1) << n) * factorial(n + 1);
    const cpp_int rhs = (cpp_int(1) << (n + 1)) * factorial(n + 2);
    o.require(lhs == rhs, "identity fails at n=" + std::to_string(n));
    o.require(cpp_int(node_bound(n)) == (cpp_int(1) << n) * factorial(n + 1), "node_bound(" + std::to_string(n) + ")");
  }
  for (std::size_t i = 0; i <= 4; ++i) {
    for (std::size_t n = 0; n + i <= 8; ++n) {
      o.require(cpp_int(trace_bound(i, n)) == (cpp_int(1) << (n + i)) * factorial(n + i + 1),
                "trace_bound(" + std::to_string(i) + "," + std::to_string(n) + ")");
    }
  }
  if (o.ok) o.detail << "100 runs to horizon 8; counting identity exact for n<=8";
  return o;
}

// Reference coding: each bit of n followed by 0, the last by 1, then m in binary.
std::string selfdelim_reference(std::uint64_t n, std::uint64_t m) {
  auto bin = [](std::uint64_t v) {
    std::string s;
    for (; v; v >>= 1) s.insert(s.begin(), static_cast<char>('0' + (v & 1)));
    return s;
  };
  const auto bn = bin(n);
  std::string out;
  for (std::size_t k = 0; k < bn.size(); ++k) {
    out += bn[k];
    out += k + 1 == bn.size() ? '1' : '0';
  }
  return out + bin(m);
}

std::size_t ceil_log2_plus1(std::uint64_t v) {
  std::size_t b = 0;
  while ((std::uint64_t{1} << b) < v + 1) ++b;
  return b;
}

Outcome criterion5() {
  Outcome o;
  require_sweep(o, sweep_trace_from_thin(1000, kSeed, Exec::parallel), 1000);
  require_sweep(o, sweep_thin_from_trace(1000, kSeed, Exec::parallel), 1000);
  require_sweep(o, sweep_rescale(1000, kSeed, Exec::parallel), 1000);
  require_sweep(o, sweep_selfdelim(64, 64), 4096);
  for (std::uint64_t n = 1; n <= 64; ++n) {
    for (std::uint64_t m = 1; m <= 64; ++m) {
      const auto code = selfdelim_encode(n, m);
      o.require(code.bits() == selfdelim_reference(n, m), "selfdelim code differs at " + std::to_string(n) + "," +
                                                              std::to_string(m));
      o.require(selfdelim_decode(code) == std::make_pair(n, m), "selfdelim round trip at " + std::to_string(n));
      o.require(code.size() <= 2 * ceil_log2_plus1(n) + ceil_log2_plus1(m), "selfdelim length law");
    }
  }
  Rational partial = 0;
  for (std::size_t i = 1; i <= 60; ++i) partial += Rational(cpp_int(i), cpp_int(1) << (2 * i));
  const Rational four_ninths(4, 9);
  o.require(partial < four_ninths && four_ninths - partial < Rational(cpp_int(1), cpp_int(1) << 100),
            "partial sum " + partial.str());
  o.require(spaced_bound_partial_sum(0, 60) == partial, "library partial sum differs");
  if (o.ok) o.detail << "3000 trace/thin instances; selfdelim exact for n,m<=64; 4/9 - S_60 < 2^-100";
  return o;
}

Outcome criterion6() {
  Outcome o;
  require_sweep(o, sweep_splittree(1000, kSeed, Exec::parallel), 1000);
  if (o.ok) o.detail << "1000 random (tree, splitting subset) pairs thin; mutated splits rejected with witness";
  return o;
}

Outcome criterion7() {
  using oracle::omega_level_oracle;
  using oracle::tree_oracle;
  Outcome o;
  constexpr std::size_t kCount = 60;
  require_sweep(o, sweep_selection(kCount, kSeed, Exec::parallel), kCount);
  const auto fig = two_node_instance();
  o.require(fig.lambda.size() == 2, "two-node configuration has " + std::to_string(fig.lambda.size()) + " nodes");

  std::size_t nonempty = 0, exhaustive = 0;
  auto check_instance = [&](const OmegaContext& ctx, const std::vector<LambdaNode>& lambda, const std::string& tag) {
    const BinaryString base;
    const auto res = select_extensions(ctx, base, 0, lambda, base);
    std::vector<std::vector<BinaryString>> pools;
    for (const auto& node : lambda) {
      const auto t = tree_oracle(ctx.phi, node.tau);
      pools.push_back(members_of_level(t, omega_level_oracle(t, ctx.f)));
    }
    // Independent validity: levels, containment and all-pairs incompatibility.
    o.require(res.sigma_pairs.size() == lambda.size(), tag + ": missing pairs");
    std::vector<BinaryString> chosen;
    for (const auto& [i, pr] : res.sigma_pairs) {
      for (const auto& x : {pr.first, pr.second}) {
        o.require(std::find(pools[i].begin(), pools[i].end(), x) != pools[i].end(), tag + ": " + x.token() + " off-level");
        chosen.push_back(x);
      }
    }
    for (std::size_t a = 0; a < chosen.size(); ++a) {
      for (std::size_t b = a + 1; b < chosen.size(); ++b) {
        o.require(!chosen[a].compatible_with(chosen[b]), tag + ": " + chosen[a].token() + " ~ " + chosen[b].token());
      }
    }
    // Exact floors recomputed from the Pi levels.
    for (const auto& step : res.steps) {
      Rational r = 0;
      for (const auto& node : lambda) {
        if (node.pi_level <= step.m) r += Rational(cpp_int(1), cpp_int(1) << node.pi_level);
      }
      o.require(r <= 1 && step.floor == (1 - r) * Rational(cpp_int(1) << (step.m + 1)), tag + ": floor mismatch");
    }
    const bool small = std::all_of(pools.begin(), pools.end(), [](const auto& p) { return p.size() <= 12; });
    if (!small) return;
    std::vector<BinaryString> picked;
    std::function<bool(std::size_t)> search = [&](std::size_t slot) {
      if (slot == 2 * pools.size()) return true;
      for (const auto& x : pools[slot / 2]) {
        if (std::any_of(picked.begin(), picked.end(), [&](const BinaryString& y) { return y.compatible_with(x); })) continue;
        picked.push_back(x);
        if (search(slot + 1)) return true;
        picked.pop_back();
      }
      return false;
    };
    o.require(search(0), tag + ": exhaustive search finds no valid selection");
    ++exhaustive;
  };

  for (std::size_t k = 0; k < kCount; ++k) {
    const auto inst = k == 0 ? fig : random_selection_instance(item_seed(kSeed, k));
    if (inst.lambda.empty()) continue;
    if (k > 0) ++nonempty;
    check_instance(inst.ctx, inst.lambda, "instance " + std::to_string(k));
  }
  // Small-pool corpus: short oracles keep every pool at 12 strings or fewer.
  std::size_t small_corpus = 0;
  for (std::uint64_t seed = 1; small_corpus < 40 && seed < 400; ++seed) {
    SmcScenarioParams p;
    p.seed = item_seed(kSeed, seed);
    p.oracle_len = 4;
    p.depth_cap = 8;
    const auto ctx = generate_smc_context(p);
    std::vector<BinaryString> cands;
    for (std::size_t len = 1; len <= 4; ++len) {
      for (const auto& x : strings_of_length(len)) {
        const auto t = tree_oracle(ctx.phi, x);
        const auto lev = omega_level_oracle(t, ctx.f);
        if (lev >= 2 && members_of_level(t, lev).size() <= 12) cands.push_back(x);
      }
    }
    for (std::size_t a = 0; a < cands.size() && small_corpus < 40; a += 3) {
      std::vector<LambdaNode> lambda{{cands[a], 1}};
      for (std::size_t b = a + 1; b < cands.size(); ++b) {
        if (!cands[a].compatible_with(cands[b])) {
          lambda.push_back({cands[b], 1});
          break;
        }
      }
      const auto before = exhaustive;
      check_instance(ctx, lambda, "small instance " + std::to_string(small_corpus));
      small_corpus += exhaustive - before;
    }
  }
  o.require(small_corpus >= 40, "small-pool corpus has " + std::to_string(small_corpus) + " instances");
  o.require(nonempty >= 50, "only " + std::to_string(nonempty) + " nonempty random configurations");
  if (o.ok) {
    o.detail << "two-node configuration plus " << nonempty << " random thin configurations; exhaustive search on " << exhaustive
             << " small-pool instances";
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  require_sweep(o, sweep_theta(50, kSeed, Exec::parallel), 50);
  if (o.ok) o.detail << "50 stagings: prefix-free Theta, leaf paths decode to the staged prefix";
  return o;
}

Outcome criterion9() {
  Outcome o;
  require_sweep(o, sweep_trelem1(1000, kSeed, Exec::parallel), 1000);
  if (o.ok) o.detail << "1000 random splitting trees: pullback(image) = t0, 2-branching kept";
  return o;
}

Outcome criterion10() {
  Outcome o;
  const SuiteOptions opts{kSeed, false};
  const auto full_a = run_suite(SuiteLevel::full, opts).render();
  const auto full_b = run_suite(SuiteLevel::full, opts).render();
  o.require(full_a == full_b, "full suite reports differ");
  const auto fast_a = run_suite(SuiteLevel::fast, opts).render();
  o.require(fast_a == run_suite(SuiteLevel::fast, opts).render(), "fast suite reports differ");
  o.require(sweep_theta(6, kSeed, Exec::serial) == sweep_theta(6, kSeed, Exec::parallel), "theta serial != parallel");
  o.require(sweep_selection(10, kSeed, Exec::serial) == sweep_selection(10, kSeed, Exec::parallel),
            "selection serial != parallel");
  if (o.ok) o.detail << "full and fast suites byte-identical across runs (" << full_a.size() << " bytes)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail.str(std::string("exception: ") + e.what());
    }
    failures += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
