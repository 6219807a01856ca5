#include "pi01/sweeps.hpp"

#include <algorithm>
#include <exception>

#include "pi01/error.hpp"

namespace pi01 {

namespace {

ItemResult pass() { return {}; }
ItemResult fail(std::string why) { return {false, std::move(why)}; }

std::string bits_of(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (auto x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

// Extend a set with random extra members, keeping it thin in t.
FiniteTree random_thin_subset(const FiniteTree& t, std::mt19937_64& rng, std::size_t cap) {
  FiniteTree tp{BinaryString{}};
  auto members = t.sorted();
  std::shuffle(members.begin(), members.end(), rng);
  for (const auto& x : members) {
    if (tp.size() >= cap) break;
    auto trial = tp;
    trial.insert(x);
    if (is_thin(t, trial)) tp = std::move(trial);
  }
  return tp;
}

}  // namespace

std::size_t SweepResult::passed() const {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const ItemResult& r) { return r.ok; }));
}

std::optional<std::size_t> SweepResult::first_failure() const {
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (!items[k].ok) return k;
  }
  return std::nullopt;
}

std::uint64_t item_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed * 0x9e3779b97f4a7c15ULL + index + 1;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SweepResult run_indexed(const std::string& id, std::size_t count, Exec exec,
                        const std::function<ItemResult(std::size_t)>& fn) {
  SweepResult res{id, std::vector<ItemResult>(count)};
  auto one = [&](std::size_t k) {
    try {
      res.items[k] = fn(k);
    } catch (const Error& e) {
      res.items[k] = fail(std::string(to_string(e.kind())) + ": " + e.what());
    } catch (const std::exception& e) {
      res.items[k] = fail(std::string("exception: ") + e.what());
    }
  };
  if (exec == Exec::serial) {
    for (std::size_t k = 0; k < count; ++k) one(k);
  } else {
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t k = 0; k < n; ++k) one(static_cast<std::size_t>(k));
  }
  return res;
}

Coloring twocol_coloring(std::size_t n, std::uint64_t index) {
  const auto level = bushy_level_strings(Shape::even, n);
  if (level.size() > 64) throw Error(ErrorKind::resource, "too many leaves to index colourings");
  Coloring c;
  for (std::size_t b = 0; b < level.size(); ++b) c.assignment[level[b]] = static_cast<std::uint32_t>((index >> b) & 1U);
  return c;
}

SweepResult sweep_twocol_exhaustive(std::size_t n, Exec exec) {
  if (n > 2) throw Error(ErrorKind::resource, "exhaustive twocol is limited to n <= 2");
  const auto leaves_count = bushy_level_strings(Shape::even, n).size();
  const std::vector<std::uint64_t> f(n, 2);
  return run_indexed("twocol.exhaustive.n" + std::to_string(n), std::size_t{1} << leaves_count, exec, [&](std::size_t k) {
    const auto c = twocol_coloring(n, k);
    const auto e = extract_twocol(n, c);
    const auto v = verify_extraction(Shape::even, f, n, c, e.d, e.sub);
    return v.ok ? pass() : fail("colouring " + std::to_string(k) + ": " + v.witness);
  });
}

SweepResult sweep_twocol_sampled(std::size_t n, std::size_t count, std::uint64_t seed, Exec exec) {
  const auto full = full_tree(Shape::even, n);
  const std::vector<std::uint64_t> f(n, 2);
  return run_indexed("twocol.sampled.n" + std::to_string(n), count, exec, [&](std::size_t k) {
    std::mt19937_64 rng(item_seed(seed, k));
    const auto c = random_coloring(full, 2, rng);
    const auto e = extract_twocol(n, c);
    const auto v = verify_extraction(Shape::even, f, n, c, e.d, e.sub);
    return v.ok ? pass() : fail("sample " + std::to_string(k) + ": " + v.witness);
  });
}

SweepResult sweep_nice_sampled(std::size_t i, std::size_t n, std::size_t count, std::uint64_t seed, Exec exec) {
  const auto source_f = kappa_schedule(i, n);
  const auto target_f = kappa_schedule(i + 1, n);
  return run_indexed("nice.i" + std::to_string(i) + ".n" + std::to_string(n), count, exec, [&](std::size_t k) {
    std::mt19937_64 rng(item_seed(seed, k));
    const auto t0 = random_compatible(Shape::graded, source_f, n, rng);
    auto c = random_coloring(t0, static_cast<std::uint32_t>(ncol(i)), rng);
    if (k % 3 == 0) {
      for (auto& [s, v] : c.assignment) {
        if (rng() % 4 == 0) v.reset();
      }
    }
    const auto e = extract_nice(i, t0, c);
    const auto v = verify_extraction(Shape::graded, target_f, n, c, e.d, e.sub, &t0);
    return v.ok ? pass() : fail("sample " + std::to_string(k) + ": " + v.witness);
  });
}

SweepResult sweep_kappa(std::size_t max_i, std::size_t max_n) {
  SweepResult res{"kappa.closed-form", {}};
  for (std::size_t i = 0; i <= max_i; ++i) {
    for (std::size_t n = i; n <= max_n; ++n) {
      const auto closed = std::uint64_t{1} << (n - i + 2);
      const auto got = kappa(i, n);
      const auto rec = kappa_recurrence(i, n);
      if (got == closed && rec == closed) {
        res.items.push_back(pass());
      } else {
        res.items.push_back(fail("kappa_" + std::to_string(i) + "(" + std::to_string(n) + ")=" + std::to_string(got) +
                                 " recurrence " + std::to_string(rec) + " closed " + std::to_string(closed)));
      }
    }
  }
  return res;
}

std::vector<AdversaryBundle> adversary_corpus(std::uint64_t seed, std::size_t count) {
  std::vector<AdversaryBundle> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::mt19937_64 rng(item_seed(seed, k));
    AdversaryBundle adv;
    if (k == 0) {
      out.push_back(adv);
      continue;
    }
    if (k % 3 == 1) {
      // Blockers: Psi_i converges on every long enough oracle, with a value depending on the first bits.
      const auto width = k % 2 == 0 ? 0 : 2;
      for (std::size_t i = 0; i < 3; ++i) {
        FunctionalTable f;
        for (const auto& sigma : strings_of_length(width)) {
          for (std::size_t arg = 0; arg <= i; ++arg) f.add({sigma, arg, rng() % ncol(arg), 1});
        }
        adv.psi.push_back(std::move(f));
      }
    } else {
      const auto functionals = 1 + rng() % 4;
      const auto axioms = 1 + rng() % (200 / functionals);
      for (std::size_t i = 0; i < functionals; ++i) {
        FunctionalTable f;
        for (std::size_t a = 0; a < axioms; ++a) {
          const auto len = rng() % 10;
          f.try_add({BinaryString::from_uint(rng(), len), rng() % (i + 1), rng() % (ncol(i) + 1), 1 + rng() % 9});
        }
        adv.psi.push_back(std::move(f));
      }
    }
    out.push_back(std::move(adv));
  }
  return out;
}

SweepResult sweep_pi_members(const std::vector<AdversaryBundle>& corpus, std::size_t max_n, Exec exec) {
  const auto level1 = pi_star_successors(root_node());
  return run_indexed("pi-member.corpus", corpus.size(), exec, [&](std::size_t k) {
    const auto& adv = corpus[k];
    for (std::size_t n = 0; n <= max_n; ++n) {
      const auto node = find_pi_member(n, adv);
      validate_node(node);
      if (node.level != n) return fail("bundle " + std::to_string(k) + " n=" + std::to_string(n) + ": wrong level");
      if (!ancestors_pass(node, adv)) {
        return fail("bundle " + std::to_string(k) + " n=" + std::to_string(n) + ": " + node.tau.token() + " filtered");
      }
      if (n == 0 && !(node == root_node())) return fail("bundle " + std::to_string(k) + ": n=0 is not the root");
      if (n == 1) {
        bool found = false;
        for (const auto& s : level1) {
          if (s == node) found = stage_filter(s, adv, 1);
        }
        if (!found) return fail("bundle " + std::to_string(k) + ": n=1 output not among the filtered successors");
      }
    }
    return pass();
  });
}

AdversaryBundle random_traceable_bundle(std::mt19937_64& rng) {
  AdversaryBundle adv;
  const auto count = 1 + rng() % 3;
  for (std::size_t i = 0; i < count; ++i) {
    FunctionalTable f;
    for (int k = 0; k < 12; ++k) {
      f.try_add({BinaryString::from_uint(rng(), rng() % 4), rng() % 3, rng() % 4, 1 + rng() % 5});
    }
    adv.psi.push_back(std::move(f));
  }
  return adv;
}

SweepResult sweep_traceable(std::size_t runs, std::size_t horizon, std::uint64_t seed, Exec exec) {
  return run_indexed("traceable.h" + std::to_string(horizon), runs, exec, [&](std::size_t k) {
    std::mt19937_64 rng(item_seed(seed, k));
    const auto adv = k == 0 ? AdversaryBundle{} : random_traceable_bundle(rng);
    const auto tag = "run " + std::to_string(k) + ": ";
    auto st = init_state();
    while (st.stage < horizon) {
      st = run_stage(st, adv);
      if (frontier(st, st.stage).empty()) return fail(tag + "empty frontier at stage " + std::to_string(st.stage));
    }
    for (const auto& [level, count] : st.declared_per_level) {
      if (level <= 4 && count > node_bound(level)) {
        return fail(tag + std::to_string(count) + " generations at level " + std::to_string(level));
      }
    }
    for (const auto& [i, per_n] : extract_trace(st)) {
      for (const auto& [n, values] : per_n) {
        if (values.size() > trace_bound(i, n)) {
          return fail(tag + "trace (" + std::to_string(i) + "," + std::to_string(n) + ") has " +
                      std::to_string(values.size()) + " values");
        }
      }
    }
    if (is_quiescent(st, adv)) {
      const auto v = verify_final_nodes(st, adv);
      if (!v.ok) return fail(tag + v.witness);
    }
    return pass();
  });
}

SweepResult sweep_trace_from_thin(std::size_t count, std::uint64_t seed, Exec exec) {
  return run_indexed("thin.trace-from-thin", count, exec, [&](std::size_t k) {
    std::mt19937_64 rng(item_seed(seed, k));
    FunctionalTable f;
    for (int a = 0; a < 30; ++a) {
      f.try_add({BinaryString::from_uint(rng(), 1 + rng() % 5), rng() % 4, rng() % 6, 1 + rng() % 3});
    }
    const auto tree = hat_level_tree(f, 7);
    const auto tp = random_thin_subset(tree, rng, 40);
    const auto ts = trace_from_thin(f, tree, tp);
    if (auto v = check_trace_sizes(ts); !v.ok) return fail(v.witness);
    for (const auto& [n, w] : ts.w) {
      if (w.size() > (std::size_t{1} << (n + 1))) return fail("|w[" + std::to_string(n) + "]| too large");
    }
    return pass();
  });
}

SweepResult sweep_thin_from_trace(std::size_t count, std::uint64_t seed, Exec exec) {
  return run_indexed("thin.thin-from-trace", count, exec, [&](std::size_t k) {
    std::mt19937_64 rng(item_seed(seed, k));
    const auto tree = random_weak_tree(rng, 12, 10 + k % 40);
    const auto& fin = tree.final_stage();
    TraceSystem ts;
    for (std::size_t n = 0; n <= 3; ++n) {
      std::vector<BinaryString> level;
      for (const auto& s : fin) {
        if (level_of(fin, s) == spaced_level(n)) level.push_back(s);
      }
      std::shuffle(level.begin(), level.end(), rng);
      auto& w = ts.w[n];
      for (std::size_t j = 0; j < level.size() && j < n; ++j) {
        if (rng() % 4) w.insert(string_code(level[j]));
      }
    }
    const auto tp = thin_from_trace(tree, ts);
    if (auto v = thin_violation(fin, tp)) return fail("antichain above " + v->tau.token() + " weighs " + v->weight.str());
    return pass();
  });
}

SweepResult sweep_rescale(std::size_t count, std::uint64_t seed, Exec exec) {
  return run_indexed("thin.rescale", count, exec, [&](std::size_t k) {
    std::mt19937_64 rng(item_seed(seed, k));
    std::vector<std::uint64_t> p{rng() % 3};
    for (int j = 0; j < 6; ++j) p.push_back(p.back() + rng() % 3);
    const auto q = normalize_bound(p);
    std::vector<std::uint64_t> f(12);
    for (auto& x : f) x = rng() % 4;
    const auto lifted = lift_function(f, p);
    TraceSystem ts;
    ts.p = p;
    for (std::size_t m = 0; m < p.size(); ++m) {
      auto& w = ts.w[m];
      const auto cap = std::min(q[m], p[m]);
      if (cap == 0) continue;
      if (m < lifted.size() && rng() % 2) w.insert(lifted[m]);
      while (w.size() < cap) {
        std::vector<std::uint64_t> junk(rng() % 8);
        for (auto& x : junk) x = rng() % 4;
        w.insert(rng() % 5 ? tuple_code(junk) : rng() % 1000);
      }
    }
    const auto out = rescale_trace(ts);
    for (const auto& [n, w] : out.w) {
      if (w.size() > n) return fail("p=" + bits_of(p) + ": |w'[" + std::to_string(n) + "]|=" + std::to_string(w.size()));
    }
    return pass();
  });
}

SweepResult sweep_selfdelim(std::uint64_t max_n, std::uint64_t max_m) {
  auto width = [](std::uint64_t v) {
    std::size_t b = 0;
    while (v) {
      ++b;
      v >>= 1;
    }
    return b;
  };
  SweepResult res{"selfdelim.round-trip", {}};
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    for (std::uint64_t m = 1; m <= max_m; ++m) {
      const auto code = selfdelim_encode(n, m);
      const bool ok = selfdelim_decode(code) == std::make_pair(n, m) && code.size() == 2 * width(n) + width(m);
      res.items.push_back(ok ? pass() : fail("(" + std::to_string(n) + "," + std::to_string(m) + ") -> " + code.token()));
    }
  }
  return res;
}

SweepResult sweep_splittree(std::size_t count, std::uint64_t seed, Exec exec) {
  return run_indexed("splittree", count, exec, [&](std::size_t k) {
    std::mt19937_64 rng(item_seed(seed, k));
    const auto tree = random_weak_tree(rng, 12, 10 + k % 30);
    const auto& fin = tree.final_stage();
    const auto psi = level_prefix_functional(fin);
    auto members = fin.sorted();
    std::shuffle(members.begin(), members.end(), rng);
    FiniteTree sub{BinaryString{}};
    for (const auto& x : members) {
      auto trial = sub;
      trial.insert(x);
      if (!splitting_violation(psi, trial, false)) sub = std::move(trial);
    }
    const auto r = splitting_to_thin(tree, sub);
    if (!r.thin_ok) return fail("item " + std::to_string(k) + ": splitting subset not thin");
    for (const auto& a : fin) {
      const auto n = level_of(fin, a);
      for (const auto& b : fin) {
        if (a < b && !a.compatible_with(b) && level_of(fin, b) == n && a.prefix(n) == b.prefix(n)) {
          auto mutant = sub;
          mutant.insert(a);
          mutant.insert(b);
          const auto rm = splitting_to_thin(tree, mutant);
          if (rm.thin_ok || !rm.witness) return fail("item " + std::to_string(k) + ": mutant accepted");
          return pass();
        }
      }
    }
    return pass();
  });
}

std::pair<FiniteTree, FunctionalTable> random_splitting_instance(std::mt19937_64& rng, std::size_t depth) {
  FiniteTree t{BinaryString{}};
  FunctionalTable psi;
  std::vector<BinaryString> layer{BinaryString{}};
  for (std::size_t lev = 0; lev < depth; ++lev) {
    std::vector<BinaryString> next;
    for (const auto& x : layer) {
      const auto len = 2 + rng() % 2;
      const auto r = BinaryString::from_uint(rng(), len);
      std::string flipped = r.bits();
      const auto pos = rng() % len;
      flipped[pos] = flipped[pos] == '0' ? '1' : '0';
      const BinaryString kids[2] = {x + r, x + BinaryString(flipped)};
      const auto first_bit = rng() % 2;
      for (std::uint64_t j = 0; j < 2; ++j) {
        t.insert(kids[j]);
        psi.add({kids[j], lev, j ^ first_bit, 1});
        next.push_back(kids[j]);
      }
    }
    layer = std::move(next);
  }
  return {t, psi};
}

SweepResult sweep_trelem1(std::size_t count, std::uint64_t seed, Exec exec) {
  return run_indexed("trelem1", count, exec, [&](std::size_t k) {
    std::mt19937_64 rng(item_seed(seed, k));
    const auto [t0, psi] = random_splitting_instance(rng, 1 + k % 4);
    const auto img = image_tree(psi, t0);
    if (!is_two_branching(img)) return fail("item " + std::to_string(k) + ": image not 2-branching");
    if (img.size() != t0.size()) return fail("item " + std::to_string(k) + ": image size differs");
    if (!(pullback_tree(psi, t0, img) == t0)) return fail("item " + std::to_string(k) + ": pullback differs");
    return pass();
  });
}

SelectionInstance random_selection_instance(std::uint64_t seed) {
  SmcScenarioParams p;
  p.seed = seed;
  p.depth_cap = 12;
  p.long_edge_permille = 150;
  SelectionInstance inst{generate_smc_context(p), {}};
  std::mt19937_64 rng(item_seed(seed, 7));
  std::vector<std::pair<BinaryString, std::size_t>> cands;
  for (std::size_t len = 1; len <= p.oracle_len; ++len) {
    for (const auto& s : strings_of_length(len)) cands.push_back({s, omega_level(inst.ctx, s)});
  }
  std::shuffle(cands.begin(), cands.end(), rng);
  for (const auto& [s, lev] : cands) {
    const auto m = 1 + rng() % 3;
    if (lev < 2 * m) continue;
    const auto& chosen = inst.lambda;
    if (std::any_of(chosen.begin(), chosen.end(), [&](const LambdaNode& n) { return n.tau.compatible_with(s); })) continue;
    auto trial = inst.lambda;
    trial.push_back({s, m});
    const auto r = lambda_weights(0, trial);
    if (r.back() > 1) continue;
    inst.lambda = std::move(trial);
    if (inst.lambda.size() >= 5) break;
  }
  return inst;
}

SelectionInstance two_node_instance() {
  SmcScenarioParams p;
  p.seed = 3;
  SelectionInstance inst{generate_smc_context(p), {}};
  for (std::size_t len = 1; len <= p.oracle_len && inst.lambda.size() < 2; ++len) {
    for (const auto& s : strings_of_length(len)) {
      if (inst.lambda.size() == 2) break;
      if (omega_level(inst.ctx, s) < 2) continue;
      if (!inst.lambda.empty() && inst.lambda.front().tau.compatible_with(s)) continue;
      inst.lambda.push_back({s, 1});
    }
  }
  if (inst.lambda.size() != 2) throw Error(ErrorKind::internal, "no two-node configuration in the fixed scenario");
  return inst;
}

Validation verify_selection(const OmegaContext& ctx, const std::vector<LambdaNode>& lambda, const BinaryString& sigma,
                            const SelectionResult& res) {
  if (res.sigma_pairs.size() != lambda.size()) return Validation::fail("not every node received a pair");
  std::vector<BinaryString> all;
  for (const auto& [i, pr] : res.sigma_pairs) {
    const auto t = tree_at(ctx.phi, lambda[i].tau);
    const auto lev = omega_level(ctx, lambda[i].tau);
    for (const auto& x : {pr.first, pr.second}) {
      if (!t.contains(x) || level_of(t, x) != lev) {
        return Validation::fail(x.token() + " is not of level " + std::to_string(lev) + " in T(" + lambda[i].tau.token() + ")");
      }
      if (!sigma.is_proper_prefix_of(x)) return Validation::fail(x.token() + " does not extend " + sigma.token());
      all.push_back(x);
    }
  }
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      if (all[a].compatible_with(all[b])) return Validation::fail(all[a].token() + " and " + all[b].token() + " are compatible");
    }
  }
  const auto r = lambda_weights(0, lambda);
  for (const auto& step : res.steps) {
    if (step.r != r[step.m - 1]) return Validation::fail("r_" + std::to_string(step.m) + " mismatch");
    const auto floor = (1 - step.r) * Rational(boost::multiprecision::cpp_int(1) << (step.m + 1));
    if (step.floor != floor) return Validation::fail("floor mismatch at m=" + std::to_string(step.m));
    for (const auto& [i, pool] : step.pools) {
      if (Rational(pool.size()) < floor) return Validation::fail("pool below floor at m=" + std::to_string(step.m));
    }
  }
  return Validation::pass();
}

SweepResult sweep_selection(std::size_t count, std::uint64_t seed, Exec exec) {
  return run_indexed("smc.selection", count, exec, [&](std::size_t k) {
    const auto inst = k == 0 ? two_node_instance() : random_selection_instance(item_seed(seed, k));
    if (inst.lambda.empty()) return pass();
    const auto res = select_extensions(inst.ctx, BinaryString{}, 0, inst.lambda, BinaryString{});
    const auto v = verify_selection(inst.ctx, inst.lambda, BinaryString{}, res);
    return v.ok ? pass() : fail("instance " + std::to_string(k) + ": " + v.witness);
  });
}

SweepResult sweep_theta(std::size_t count, std::uint64_t seed, Exec exec) {
  return run_indexed("smc.theta", count, exec, [&](std::size_t k) {
    SmcScenarioParams p;
    p.seed = item_seed(seed, k / 5);
    const auto ctx = generate_smc_context(p);
    const auto pi = enumerate_pi(ctx, 10).final_stage();
    std::mt19937_64 rng(item_seed(seed, k));
    const auto ps = stage_pistar_along(ctx, pi, rng, 5, 1 + k % 3);
    const auto res = build_tprime(ctx, pi, ps);
    if (auto v = check_theta(res.theta); !v.ok) return fail("staging " + std::to_string(k) + ": " + v.witness);
    const auto& star = ps.stages.final_stage();
    for (const auto& tau : star) {
      std::vector<BinaryString> path;
      for (std::size_t j = 1; j <= tau.size(); ++j) {
        if (star.contains(tau.prefix(j))) path.push_back(tau.prefix(j));
      }
      for (const auto& leaf : members_of_level(res.tprime.at(tau), level_of(star, tau))) {
        if (theta_chain(res.theta, leaf) != path) {
          return fail("staging " + std::to_string(k) + ": leaf " + leaf.token() + " does not decode to " + tau.token());
        }
      }
    }
    return pass();
  });
}

}  // namespace pi01
