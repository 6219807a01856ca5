#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pi01/error.hpp"
#include "pi01/sweeps.hpp"

using namespace pi01;

TEST_CASE("run_indexed collects results by index and turns errors into failures") {
  for (auto exec : {Exec::serial, Exec::parallel}) {
    const auto r = run_indexed("probe", 50, exec, [](std::size_t k) {
      if (k == 17) throw Error(ErrorKind::domain, "boom");
      return k % 10 == 3 ? ItemResult{false, "bad " + std::to_string(k)} : ItemResult{};
    });
    CHECK(r.items.size() == 50);
    CHECK(r.passed() == 44);
    CHECK(r.first_failure() == 3u);
    CHECK(r.items[17].witness == "domain: boom");
    CHECK_FALSE(r.ok());
  }
}

TEST_CASE("item seeds are distinct and stable") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(item_seed(42, k));
  CHECK(seen.size() == 1000);
  CHECK(item_seed(1, 0) == item_seed(1, 0));
  CHECK(item_seed(1, 0) != item_seed(2, 0));
}

TEST_CASE("serial and parallel sweeps agree") {
  CHECK(sweep_twocol_exhaustive(1, Exec::serial) == sweep_twocol_exhaustive(1, Exec::parallel));
  CHECK(sweep_twocol_sampled(2, 200, 5, Exec::serial) == sweep_twocol_sampled(2, 200, 5, Exec::parallel));
  CHECK(sweep_nice_sampled(1, 2, 200, 5, Exec::serial) == sweep_nice_sampled(1, 2, 200, 5, Exec::parallel));
  const auto corpus = adversary_corpus(3, 12);
  CHECK(sweep_pi_members(corpus, 2, Exec::serial) == sweep_pi_members(corpus, 2, Exec::parallel));
  CHECK(sweep_traceable(6, 6, 5, Exec::serial) == sweep_traceable(6, 6, 5, Exec::parallel));
  CHECK(sweep_trace_from_thin(40, 5, Exec::serial) == sweep_trace_from_thin(40, 5, Exec::parallel));
  CHECK(sweep_thin_from_trace(40, 5, Exec::serial) == sweep_thin_from_trace(40, 5, Exec::parallel));
  CHECK(sweep_rescale(40, 5, Exec::serial) == sweep_rescale(40, 5, Exec::parallel));
  CHECK(sweep_splittree(40, 5, Exec::serial) == sweep_splittree(40, 5, Exec::parallel));
  CHECK(sweep_trelem1(40, 5, Exec::serial) == sweep_trelem1(40, 5, Exec::parallel));
  CHECK(sweep_selection(4, 5, Exec::serial) == sweep_selection(4, 5, Exec::parallel));
}

TEST_CASE("twocol exhaustive sizes") {
  const auto r0 = sweep_twocol_exhaustive(0, Exec::serial);
  CHECK(r0.items.size() == 2);
  const auto r1 = sweep_twocol_exhaustive(1, Exec::parallel);
  CHECK(r1.items.size() == 16);
  CHECK(r1.ok());
  CHECK_THROWS_AS(sweep_twocol_exhaustive(3, Exec::serial), Error);
  const auto c = twocol_coloring(1, 0b1010);
  const auto level = bushy_level_strings(Shape::even, 1);
  for (std::size_t b = 0; b < 4; ++b) CHECK(c.assignment.at(level[b]) == ((0b1010 >> b) & 1U));
}

TEST_CASE("kappa closed form table") {
  const auto r = sweep_kappa(6, 10);
  std::size_t expect = 0;
  for (std::size_t i = 0; i <= 6; ++i) expect += 11 - i;
  CHECK(r.items.size() == expect);
  CHECK(r.ok());
}

TEST_CASE("adversary corpus composition") {
  const auto corpus = adversary_corpus(9, 30);
  REQUIRE(corpus.size() == 30);
  CHECK(corpus[0].psi.empty());
  std::size_t crafted = 0, random = 0;
  for (std::size_t k = 1; k < corpus.size(); ++k) {
    std::size_t axioms = 0;
    for (const auto& f : corpus[k].psi) axioms += f.axioms().size();
    CHECK(axioms <= 200);
    CHECK_FALSE(corpus[k].psi.empty());
    (k % 3 == 1 ? crafted : random) += 1;
  }
  CHECK(crafted == 10);
  CHECK(random == 19);
  // Crafted blockers decide a colour at every oracle of length >= 3.
  const auto& blocker = corpus[4].psi[0];
  CHECK(hat_eval(blocker, BinaryString::from_token("000"), 0).has_value());
  const auto again = adversary_corpus(9, 30);
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    REQUIRE(again[k].psi.size() == corpus[k].psi.size());
    for (std::size_t i = 0; i < corpus[k].psi.size(); ++i) {
      CHECK(again[k].psi[i].axioms().size() == corpus[k].psi[i].axioms().size());
    }
  }
}

TEST_CASE("random splitting instances") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [t, psi] = random_splitting_instance(rng, 1 + trial % 4);
    CHECK(is_two_branching(t));
    CHECK(t.size() == (std::size_t{2} << (trial % 4)) * 2 - 1);
    CHECK(is_splitting_tree(psi, t, false, Outputs::hat));
    for (const auto& x : t) CHECK(hat_output(psi, x).size() == level_of(t, x));
  }
}

TEST_CASE("selection verifier rejects mutated selections") {
  const auto inst = two_node_instance();
  REQUIRE(inst.lambda.size() == 2);
  const auto res = select_extensions(inst.ctx, BinaryString{}, 0, inst.lambda, BinaryString{});
  CHECK(verify_selection(inst.ctx, inst.lambda, BinaryString{}, res).ok);

  auto clash = res;
  clash.sigma_pairs[1].first = clash.sigma_pairs[0].first;
  CHECK_FALSE(verify_selection(inst.ctx, inst.lambda, BinaryString{}, clash).ok);

  auto wrong_level = res;
  wrong_level.sigma_pairs[0].first = wrong_level.sigma_pairs[0].first.parent();
  CHECK_FALSE(verify_selection(inst.ctx, inst.lambda, BinaryString{}, wrong_level).ok);

  auto missing = res;
  missing.sigma_pairs.erase(1);
  CHECK_FALSE(verify_selection(inst.ctx, inst.lambda, BinaryString{}, missing).ok);

  auto floor = res;
  floor.steps[0].floor = Rational(3);
  CHECK_FALSE(verify_selection(inst.ctx, inst.lambda, BinaryString{}, floor).ok);
}

TEST_CASE("random selection instances are thin and prefix-free") {
  std::size_t nonempty = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = random_selection_instance(seed);
    if (inst.lambda.empty()) continue;
    ++nonempty;
    for (const auto& r : lambda_weights(0, inst.lambda)) CHECK(r <= 1);
    for (std::size_t a = 0; a < inst.lambda.size(); ++a) {
      CHECK(omega_level(inst.ctx, inst.lambda[a].tau) >= 2 * inst.lambda[a].pi_level);
      for (std::size_t b = a + 1; b < inst.lambda.size(); ++b) {
        CHECK_FALSE(inst.lambda[a].tau.compatible_with(inst.lambda[b].tau));
      }
    }
  }
  CHECK(nonempty >= 15);
}
