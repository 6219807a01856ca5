#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "pi01/error.hpp"
#include "pi01/thin.hpp"

using namespace pi01;

namespace {

BinaryString S(const char* tok) { return BinaryString::from_token(tok); }

FiniteTree T(std::initializer_list<const char*> toks) {
  FiniteTree t;
  for (auto tok : toks) t.insert(S(tok));
  return t;
}

FiniteTree full_binary(std::size_t depth) {
  FiniteTree t;
  for (std::size_t len = 0; len <= depth; ++len) {
    for (auto& s : strings_of_length(len)) t.insert(s);
  }
  return t;
}

// Independent thinness oracle: every subset of every cone, weights scaled by 2^32.
bool brute_thin(const FiniteTree& t, const FiniteTree& tp) {
  if (!tp.contains(BinaryString{})) return false;
  const auto members = tp.sorted();
  for (const auto& tau : members) {
    std::vector<BinaryString> cone_members;
    std::vector<std::size_t> rel;
    std::size_t base = 0;
    for (std::size_t k = 0; k < tau.size(); ++k) base += t.contains(tau.prefix(k));
    for (const auto& x : members) {
      if (!tau.is_prefix_of(x)) continue;
      cone_members.push_back(x);
      std::size_t lev = 0;
      for (std::size_t k = 0; k < x.size(); ++k) lev += t.contains(x.prefix(k));
      rel.push_back(lev - base);
    }
    const auto m = cone_members.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      bool free = true;
      std::uint64_t weight = 0;
      for (std::size_t a = 0; a < m && free; ++a) {
        if (!((mask >> a) & 1)) continue;
        weight += std::uint64_t{1} << (32 - rel[a]);
        for (std::size_t b = a + 1; b < m; ++b) {
          if (((mask >> b) & 1) && cone_members[a].compatible_with(cone_members[b])) free = false;
        }
      }
      if (free && weight > (std::uint64_t{1} << 32)) return false;
    }
  }
  return true;
}

FiniteTree random_subset_with_root(const FiniteTree& t, std::mt19937_64& rng, std::size_t cap) {
  FiniteTree out;
  out.insert(BinaryString{});
  for (const auto& x : t) {
    if (out.size() < cap && rng() % 2) out.insert(x);
  }
  return out;
}

// Psi(sigma; k) = sigma[k] for every string sigma of length k+1 <= len.
FunctionalTable identity_like(std::size_t len) {
  FunctionalTable f;
  for (std::size_t k = 0; k < len; ++k) {
    for (auto& s : strings_of_length(k + 1)) f.add({s, k, static_cast<std::uint64_t>(s[k]), 1});
  }
  return f;
}

std::size_t bits_of(std::uint64_t v) {
  std::size_t n = 0;
  for (; v; v >>= 1) ++n;
  return n;
}

}  // namespace

TEST_CASE("kraft_weight") {
  const auto full = full_binary(3);
  CHECK(kraft_weight(full, S("e"), {S("0"), S("1")}) == 1);
  CHECK(kraft_weight(full, S("e"), {S("01")}) == Rational(1, 4));
  CHECK(kraft_weight(full, S("e"), {}) == 0);
  CHECK(kraft_weight(full, S("0"), {S("010"), S("011"), S("00")}) == 1);
  CHECK_THROWS_AS(kraft_weight(full, S("0"), {S("1")}), Error);
  CHECK_THROWS_AS(kraft_weight(full, S("e"), {S("0"), S("01")}), Error);
  CHECK_THROWS_AS(kraft_weight(full, S("0000"), {}), Error);
}

TEST_CASE("is_thin examples") {
  const auto full = full_binary(3);
  CHECK(is_thin(full, T({"e", "0", "01", "011"})));
  CHECK(is_thin(full, full));
  const auto three = T({"e", "00", "01", "1"});
  CHECK_FALSE(is_thin(three, three));
  auto v = thin_violation(three, three);
  REQUIRE(v);
  CHECK(v->tau == S("e"));
  CHECK(v->weight == Rational(3, 2));
  CHECK(v->antichain == std::vector<BinaryString>{S("1"), S("00"), S("01")});
  CHECK(kraft_weight(three, v->tau, v->antichain) == v->weight);
  CHECK_FALSE(is_thin(full, T({"0"})));
  CHECK_THROWS_AS(is_thin(full, T({"e", "0000"})), Error);
}

TEST_CASE("is_thin agrees with brute force on small subsets") {
  std::mt19937_64 rng(5);
  int thin = 0, thick = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto st = random_weak_tree(rng, 8, 4 + trial % 24);
    const auto& t = st.final_stage();
    auto tp = random_subset_with_root(t, rng, 16);
    const bool got = is_thin(t, tp);
    CHECK(got == brute_thin(t, tp));
    (got ? thin : thick)++;
    if (auto v = thin_violation(t, tp)) CHECK(kraft_weight(t, v->tau, v->antichain) == v->weight);
  }
  CHECK(thin > 20);
  CHECK(thick > 20);
}

TEST_CASE("random weak trees are weak c.e. trees") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    auto st = random_weak_tree(rng, 12, 30);
    CHECK(validate_staged_ce_tree(st, true).ok);
    for (const auto& x : st.final_stage()) CHECK(x.size() <= 12);
  }
}

TEST_CASE("trace_from_thin") {
  const auto psi = identity_like(6);
  const auto lt = hat_level_tree(psi, 6);
  for (const auto& x : lt) {
    if (!x.empty()) CHECK(x.size() >= 2);
    CHECK(level_of(lt, x) == hat_output(psi, x).size());
  }
  auto empty = trace_from_thin(psi, lt, T({"e"}));
  for (const auto& [n, w] : empty.w) CHECK(w.empty());

  auto chain = trace_from_thin(psi, lt, T({"e", "01", "011", "0110", "01101"}));
  const std::vector<std::uint64_t> bits{0, 1, 1, 0};
  REQUIRE(chain.p == std::vector<std::uint64_t>{2, 4, 8, 16});
  for (std::size_t n = 0; n < 4; ++n) CHECK(chain.w[n] == std::set<std::uint64_t>{bits[n]});

  CHECK_THROWS_AS(trace_from_thin(psi, lt, T({"e", "00", "01", "10"})), Error);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    FunctionalTable f;
    for (int k = 0; k < 30; ++k) {
      f.try_add({BinaryString::from_uint(rng(), 1 + rng() % 5), rng() % 4, rng() % 6, 1 + rng() % 3});
    }
    const auto tree = hat_level_tree(f, 7);
    auto tp = random_subset_with_root(tree, rng, 40);
    if (!is_thin(tree, tp)) continue;
    auto ts = trace_from_thin(f, tree, tp);
    CHECK(check_trace_sizes(ts).ok);
    for (const auto& [n, w] : ts.w) CHECK(w.size() <= (std::size_t{1} << (n + 1)));
  }
}

TEST_CASE("selfdelim coding") {
  CHECK(selfdelim_encode(5, 2) == S("10001110"));
  CHECK(selfdelim_encode(1, 1) == S("111"));
  for (std::uint64_t n = 1; n <= 64; ++n) {
    for (std::uint64_t m = 1; m <= 64; ++m) {
      const auto code = selfdelim_encode(n, m);
      CHECK(selfdelim_decode(code) == std::make_pair(n, m));
      CHECK(code.size() == 2 * bits_of(n) + bits_of(m));
    }
  }
  CHECK_THROWS_AS(selfdelim_encode(0, 1), Error);
  CHECK_THROWS_AS(selfdelim_encode(1, 0), Error);
  CHECK_THROWS_AS(selfdelim_decode(S("1000")), Error);
  CHECK_THROWS_AS(selfdelim_decode(S("11")), Error);
  CHECK_THROWS_AS(selfdelim_decode(S("110")), Error);
}

TEST_CASE("tuple and string codes") {
  CHECK(tuple_code({}) == 1);
  CHECK(tuple_decode(1) == std::vector<std::uint64_t>{});
  CHECK(tuple_code({0}) == 0b111);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint64_t> v(rng() % 6);
    for (auto& x : v) x = rng() % 9;
    CHECK(tuple_decode(tuple_code(v)) == v);
  }
  CHECK_FALSE(tuple_decode(0b110));
  CHECK(string_code(S("e")) == 1);
  CHECK(string_code(S("01")) == 0b101);
  CHECK(string_decode(0b101) == S("01"));
  CHECK_FALSE(string_decode(0));
}

TEST_CASE("rescale_trace") {
  const std::vector<std::uint64_t> id{0, 1, 2, 3, 4, 5, 6};
  for (std::size_t n = 0; n + 1 < id.size(); ++n) {
    CHECK(k_of(id, n) == n);
    CHECK(kprime_of(id, n) == n + 1);
  }
  CHECK(normalize_bound({3, 5, 5, 7}) == std::vector<std::uint64_t>{0, 6, 7, 10});
  CHECK(normalize_bound({2, 4, 6}) == std::vector<std::uint64_t>{0, 4, 6});
  CHECK_THROWS_AS(normalize_bound({1, 4, 3}), Error);

  TraceSystem empty{id, {}};
  for (const auto& [n, w] : rescale_trace(empty).w) CHECK(w.empty());

  std::mt19937_64 rng(44);
  int caught = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::uint64_t> p{rng() % 3};
    for (int k = 0; k < 6; ++k) p.push_back(p.back() + rng() % 3);
    const auto q = normalize_bound(p);
    // Definitional oracle for k and k'.
    for (std::size_t n = 0; n < 12; ++n) {
      std::optional<std::size_t> k;
      for (std::size_t m = 0; m < q.size(); ++m) {
        if (q[m] <= n) k = m;
      }
      if (q.back() <= n) k.reset();
      CHECK(k_of(q, n) == k);
      std::optional<std::size_t> kp;
      // k(m) > n iff some index j > n has p(j) <= m.
      for (std::size_t m = 0; m < 64 && !kp; ++m) {
        for (std::size_t j = n + 1; j < q.size(); ++j) {
          if (q[j] <= m) kp = m;
        }
      }
      CHECK(kprime_of(q, n) == kp);
    }
    std::vector<std::uint64_t> f(12);
    for (auto& x : f) x = rng() % 4;
    const auto lifted = lift_function(f, p);
    TraceSystem ts;
    ts.p = p;
    for (std::size_t m = 0; m < p.size(); ++m) {
      auto& w = ts.w[m];
      const auto cap = q[m] < p[m] ? q[m] : p[m];
      if (cap == 0) continue;
      if (m < lifted.size() && rng() % 2) w.insert(lifted[m]);
      while (w.size() < cap) {
        std::vector<std::uint64_t> junk(rng() % 8);
        for (auto& x : junk) x = rng() % 4;
        w.insert(rng() % 5 ? tuple_code(junk) : rng() % 1000);
      }
    }
    const auto out = rescale_trace(ts);
    for (const auto& [n, w] : out.w) CHECK(w.size() <= n);
    for (std::size_t n = 0; n < out.p.size() && n < f.size(); ++n) {
      const auto k = *k_of(q, n);
      if (k > 0 && k < lifted.size() && ts.w[k].count(lifted[k])) {
        ++caught;
        CHECK(out.w.at(n).count(f[n]));
      }
    }
  }
  CHECK(caught > 50);
}

TEST_CASE("thin_from_trace") {
  std::mt19937_64 rng(77);
  auto st = random_weak_tree(rng, 12, 20);
  TraceSystem none;
  CHECK(thin_from_trace(st, none) == T({"e"}));

  CHECK(spaced_level(0) == 0);
  CHECK(spaced_level(1) == 2);
  CHECK(spaced_level(2) == 6);
  // Partial sums of i 4^-i against the closed form x(1-(K+1)x^K+Kx^(K+1))/(1-x)^2 with x = 1/4.
  const Rational x(1, 4);
  Rational xk = 1;
  for (std::size_t k = 1; k <= 40; ++k) {
    xk *= x;
    const Rational closed = x * (1 - Rational(k + 1) * xk + Rational(k) * xk * x) / ((1 - x) * (1 - x));
    CHECK(spaced_bound_partial_sum(0, k) == closed);
    CHECK(spaced_bound_partial_sum(0, k) < Rational(4, 9));
  }
  CHECK(Rational(4, 9) - spaced_bound_partial_sum(0, 40) < Rational(1, 1000000000));
  for (std::size_t n = 0; n < 6; ++n) CHECK(spaced_bound_partial_sum(n, 60) < 1);

  int nontrivial = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto tree = random_weak_tree(rng, 12, 10 + trial % 40);
    const auto& fin = tree.final_stage();
    TraceSystem ts;
    for (std::size_t n = 0; n <= 3; ++n) {
      std::vector<BinaryString> level;
      for (const auto& s : fin) {
        if (level_of(fin, s) == spaced_level(n)) level.push_back(s);
      }
      std::shuffle(level.begin(), level.end(), rng);
      auto& w = ts.w[n];
      for (std::size_t k = 0; k < level.size() && k < n; ++k) {
        if (rng() % 4) w.insert(string_code(level[k]));
      }
    }
    auto tp = thin_from_trace(tree, ts);
    CHECK(is_thin(fin, tp));
    if (tp.size() > 2) ++nontrivial;
  }
  CHECK(nontrivial > 100);

  TraceSystem bad;
  bad.w[1] = {string_code(S("0101010101"))};
  CHECK_THROWS_AS(thin_from_trace(st, bad), Error);
  TraceSystem big;
  big.w[1] = {1, 2};
  CHECK_THROWS_AS(thin_from_trace(st, big), Error);
}

TEST_CASE("dnr_trace") {
  CHECK(dnr_trace({}).w.empty());
  std::vector<FunctionalTable> adv(4);
  adv[2].add({S("e"), 2, 9, 5});
  adv[3].add({S("0"), 3, 1, 1});
  const auto ts = dnr_trace(adv);
  CHECK(ts.w.at(2) == std::set<std::uint64_t>{9});
  CHECK(ts.w.at(3).empty());
  for (std::size_t n = 1; n < 4; ++n) CHECK(ts.w.at(n).size() <= std::min<std::size_t>(1, n));
}

TEST_CASE("splitting_to_thin") {
  std::mt19937_64 rng(91);
  auto st = random_weak_tree(rng, 10, 25);
  auto r0 = splitting_to_thin(st, T({"e"}));
  CHECK(r0.thin_ok);
  CHECK_THROWS_AS(splitting_to_thin(st, FiniteTree{}), Error);

  StagedTree collide{{T({"e"}), T({"e", "00"}), T({"e", "00", "01"})}};
  auto rc = splitting_to_thin(collide, T({"e", "00", "01"}));
  CHECK_FALSE(rc.thin_ok);
  REQUIRE(rc.witness);
  CHECK(*rc.witness == std::make_pair(S("00"), S("01")));

  int mutants = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto tree = random_weak_tree(rng, 12, 10 + trial % 30);
    const auto& fin = tree.final_stage();
    const auto psi = level_prefix_functional(fin);
    for (const auto& x : fin) CHECK(bit_prefix(output(psi, x)) == x.prefix(level_of(fin, x)));

    auto members = fin.sorted();
    std::shuffle(members.begin(), members.end(), rng);
    FiniteTree sub;
    sub.insert(BinaryString{});
    for (const auto& x : members) {
      auto trial_sub = sub;
      trial_sub.insert(x);
      if (!splitting_violation(psi, trial_sub, false)) sub = trial_sub;
    }
    auto r = splitting_to_thin(tree, sub);
    CHECK(r.thin_ok);
    CHECK_FALSE(r.witness);

    // Mutation: two equal-level incompatible members agreeing on their level prefix.
    for (const auto& a : fin) {
      bool done = false;
      for (const auto& b : fin) {
        const auto n = level_of(fin, a);
        if (a < b && !a.compatible_with(b) && level_of(fin, b) == n && a.prefix(n) == b.prefix(n)) {
          auto mutant = sub;
          mutant.insert(a);
          mutant.insert(b);
          auto rm = splitting_to_thin(tree, mutant);
          CHECK_FALSE(rm.thin_ok);
          REQUIRE(rm.witness);
          CHECK(is_splitting_pair(rm.psi, rm.witness->first, rm.witness->second) == false);
          ++mutants;
          done = true;
          break;
        }
      }
      if (done) break;
    }
  }
  CHECK(mutants > 100);
}

TEST_CASE("trace_from_bounded_splitting") {
  FunctionalTable chain_psi({{S("00"), 0, 4, 1}, {S("0000"), 1, 6, 1}});
  auto chain = trace_from_bounded_splitting(chain_psi, T({"e", "00", "0000"}), 1);
  CHECK(chain.trace.w.at(0) == std::set<std::uint64_t>{4});
  CHECK(chain.trace.w.at(1) == std::set<std::uint64_t>{6});
  CHECK(chain.trace.p == std::vector<std::uint64_t>{1, 1});

  auto none = trace_from_bounded_splitting(FunctionalTable{}, full_binary(3), 2);
  for (const auto& [n, w] : none.trace.w) CHECK(w.empty());
  CHECK(none.trace.p == std::vector<std::uint64_t>{2, 4, 8});
  CHECK(none.level_n_bound == std::vector<std::uint64_t>{1, 2, 4});
  CHECK_THROWS_AS(trace_from_bounded_splitting(FunctionalTable{}, full_binary(3), 1), Error);

  std::mt19937_64 rng(8);
  const auto tree = full_binary(3);
  for (int trial = 0; trial < 100; ++trial) {
    FunctionalTable f;
    for (int k = 0; k < 20; ++k) {
      f.try_add({BinaryString::from_uint(rng(), 1 + rng() % 3), rng() % 3, rng() % 7, 1 + rng() % 2});
    }
    auto bt = trace_from_bounded_splitting(f, tree, 2);
    for (std::size_t n = 0; n < 3; ++n) {
      std::set<std::uint64_t> expect;
      for (const auto& s : strings_of_length(n + 1)) {
        auto h = hat_output(f, s);
        if (h.size() > n) expect.insert(h[n]);
      }
      CHECK(bt.trace.w[n] == expect);
      CHECK(bt.trace.w[n].size() <= bt.trace.p[n]);
    }
  }
}

TEST_CASE("majorizer_from_perfect") {
  const auto t = T({"e", "00", "10", "0000", "0001", "1000", "1001"});
  FunctionalTable f({{S("00"), 0, 0, 1},
                     {S("10"), 0, 1, 1},
                     {S("0000"), 1, 3, 1},
                     {S("0001"), 1, 9, 1},
                     {S("1000"), 1, 4, 1},
                     {S("1001"), 1, 3, 1}});
  CHECK(majorizer_from_perfect(f, t, 1) == 9);
  CHECK(majorizer_from_perfect(f, t, 0) == 1);
  std::uint64_t brute = 0;
  for (const auto& s : members_of_level(t, 2)) brute = std::max(brute, *hat_eval(f, s, 1));
  CHECK(brute == 9);

  FunctionalTable same({{S("00"), 0, 0, 1},
                        {S("10"), 0, 1, 1},
                        {S("0000"), 1, 5, 1},
                        {S("0001"), 1, 6, 1},
                        {S("1000"), 1, 5, 1},
                        {S("1001"), 1, 6, 1}});
  CHECK(majorizer_from_perfect(same, t, 1) == 6);

  FunctionalTable flat({{S("00"), 0, 0, 1}, {S("10"), 0, 0, 1}});
  CHECK_THROWS_AS(majorizer_from_perfect(flat, t, 0), Error);
  CHECK_THROWS_AS(majorizer_from_perfect(f, T({"e", "00", "0000"}), 1), Error);
  try {
    FunctionalTable split_early({{S("00"), 0, 0, 1}, {S("10"), 0, 1, 1}});
    majorizer_from_perfect(split_early, T({"e", "00", "10"}), 0);
  } catch (const Error&) {
    FAIL("level-1 values are defined");
  }
}
