#include "pi01/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <sstream>

#include "pi01/error.hpp"
#include "pi01/sweeps.hpp"

namespace pi01 {

namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream is{std::string(text)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

[[noreturn]] void syntax(std::size_t line, const std::string& why) {
  throw Error(ErrorKind::format, "line " + std::to_string(line) + ": " + why);
}

template <class T>
T parse_int(std::size_t line, const std::string& word) {
  T v{};
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc{} || ptr != word.data() + word.size()) syntax(line, "not an integer: " + word);
  return v;
}

BinaryString parse_sigma(std::size_t line, const std::string& word) {
  try {
    return BinaryString::from_token(word);
  } catch (const Error&) {
    syntax(line, "not a binary string: " + word);
  }
}

std::string axiom_text(const Axiom& a) {
  return a.sigma.token() + " " + std::to_string(a.arg) + " " + std::to_string(a.value) + " " + std::to_string(a.steps);
}

std::string values_text(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (auto x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out.empty() ? "-" : out;
}

template <class Set>
std::string set_text(const Set& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : ",") + std::to_string(x);
  return "{" + out + "}";
}

void parse_options(CLI::App& app, const std::vector<std::string>& words, std::size_t from) {
  std::vector<std::string> args(words.begin() + static_cast<std::ptrdiff_t>(from), words.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::format, std::string(app.get_name()) + ": " + e.what());
  }
}

std::vector<FunctionalTable> adversary_from(const Scenario& s) {
  std::vector<FunctionalTable> out;
  for (const auto& [name, f] : s.functionals) out.push_back(f);
  return out;
}

// One line per item of a sweep.
void add_items(Report& r, const SweepResult& sw, const std::string& prefix) {
  const auto width = std::to_string(sw.items.empty() ? 0 : sw.items.size() - 1).size();
  for (std::size_t k = 0; k < sw.items.size(); ++k) {
    auto idx = std::to_string(k);
    idx.insert(0, width - idx.size(), '0');
    r.check(sw.items[k].ok, prefix + "." + idx, sw.items[k].witness);
  }
}

// One summary line per sweep.
void add_summary(Report& r, const SweepResult& sw, const std::string& id) {
  const auto fail_at = sw.first_failure();
  r.check(!fail_at, id,
          fail_at ? "item " + std::to_string(*fail_at) + ": " + sw.items[*fail_at].witness
                  : std::to_string(sw.passed()) + "/" + std::to_string(sw.items.size()));
}

SweepResult twocol_sweep(std::size_t n, bool exhaustive, std::size_t samples, std::uint64_t seed, bool mutant) {
  const auto full = full_tree(Shape::even, n);
  const std::vector<std::uint64_t> f(n, 2);
  const auto leaves_count = bushy_level_strings(Shape::even, n).size();
  if (exhaustive && n > 2) throw Error(ErrorKind::resource, "exhaustive twocol is limited to n <= 2");
  const std::size_t count = exhaustive ? std::size_t{1} << leaves_count : samples;
  return run_indexed("twocol", count, Exec::parallel, [&](std::size_t k) {
    Coloring c;
    if (exhaustive) {
      c = twocol_coloring(n, k);
    } else {
      std::mt19937_64 rng(item_seed(seed, k));
      c = random_coloring(full, 2, rng);
    }
    const auto e = extract_twocol(n, c);
    if (mutant) {
      const auto lv = leaves(e.sub);
      auto& v = c.assignment[lv.front()];
      v = v ? 1 - *v : 0;
    }
    const auto v = verify_extraction(Shape::even, f, n, c, e.d, e.sub);
    return v.ok ? ItemResult{true, "d=" + std::to_string(e.d) + " sub=" + tokens(e.sub)}
                : ItemResult{false, "colouring " + std::to_string(k) + ": " + v.witness};
  });
}

Report verify_cmd(const std::vector<std::string>& w, const Scenario& s, Report r) {
  const auto& what = w.at(1);
  CLI::App app{what};
  std::size_t n = 1, i = 0, samples = 100;
  bool exhaustive = false, mutant = false;
  app.add_option("--n", n);
  app.add_option("--i", i);
  app.add_option("--samples", samples);
  app.add_flag("--exhaustive", exhaustive);
  app.add_flag("--inject-mutant", mutant);
  parse_options(app, w, 2);
  if (what == "twocol") {
    add_items(r, twocol_sweep(n, exhaustive, samples, s.seed, mutant), "twocol.n" + std::to_string(n));
  } else if (what == "nice") {
    add_items(r, sweep_nice_sampled(i, n, samples, s.seed, Exec::parallel),
              "nice.i" + std::to_string(i) + ".n" + std::to_string(n));
  } else if (what == "kappa") {
    for (std::size_t m = i; m <= n; ++m) {
      const auto closed = std::uint64_t{1} << (m - i + 2);
      r.check(kappa(i, m) == closed && kappa_recurrence(i, m) == closed,
              "kappa.i" + std::to_string(i) + ".n" + std::to_string(m), std::to_string(kappa(i, m)));
    }
  } else {
    throw Error(ErrorKind::protocol, "unknown command: verify " + what);
  }
  return r;
}

Report run_cmd(const std::vector<std::string>& w, const Scenario& s, Report r) {
  const auto& what = w.at(1);
  CLI::App app{what};
  std::size_t n = 1, horizon = 8, stages = 5, succ = 2, budget = 100000;
  std::string tree_name, psi_name, phi_name, b_tok = "e", avoid_tok, a_tok;
  bool tight = false;
  app.add_option("--n", n);
  app.add_option("--horizon", horizon);
  app.add_option("--tree", tree_name);
  app.add_option("--psi", psi_name);
  app.add_option("--phi", phi_name);
  app.add_option("--b", b_tok);
  app.add_option("--avoid", avoid_tok);
  app.add_option("--a", a_tok);
  app.add_option("--budget", budget);
  app.add_option("--stages", stages);
  app.add_option("--succ", succ);
  app.add_flag("--tight", tight);
  parse_options(app, w, 2);
  if (what == "cupping") {
    const AdversaryBundle adv{adversary_from(s)};
    const auto node = find_pi_member(n, adv);
    r.check(ancestors_pass(node, adv), "cupping.n" + std::to_string(n),
            "tau=" + node.tau.token() + " values=" + values_text(node.psi_values) + " tree=" + tokens(node.t_tau));
  } else if (what == "traceable") {
    const AdversaryBundle adv{adversary_from(s)};
    auto st = init_state();
    while (st.stage < horizon) {
      st = run_stage(st, adv);
      const auto fr = frontier(st, st.stage);
      r.check(!fr.empty(), "traceable.frontier.s" + std::to_string(st.stage), std::to_string(fr.size()) + " strings");
    }
    for (const auto& [level, count] : st.declared_per_level) {
      r.check(count <= node_bound(level), "traceable.generations.l" + std::to_string(level),
              std::to_string(count) + "<=" + std::to_string(node_bound(level)));
    }
    for (const auto& [i, per_n] : extract_trace(st)) {
      for (const auto& [m, values] : per_n) {
        r.check(values.size() <= trace_bound(i, m), "traceable.trace.i" + std::to_string(i) + ".n" + std::to_string(m),
                set_text(values));
      }
    }
    if (is_quiescent(st, adv)) {
      const auto v = verify_final_nodes(st, adv);
      r.check(v.ok, "traceable.final-nodes", v.ok ? "quiescent" : v.witness);
    } else {
      r.add(Status::pass, "traceable.final-nodes", "not quiescent; not checked");
    }
  } else if (what == "smc") {
    const auto& t = s.tree(tree_name);
    const auto& psi = s.functional(psi_name);
    std::optional<BinaryString> avoid;
    if (!avoid_tok.empty()) avoid = BinaryString::from_token(avoid_tok);
    const auto res = smc_driver_stage({BinaryString::from_token(b_tok), t}, psi, budget, avoid);
    r.add(Status::pass, "smc.driver",
          std::string("branch=") + to_string(res.branch) + " b_next=" + res.next.b.token() + " t_next=" + tokens(res.next.t));
    r.check(is_two_branching(res.next.t), "smc.two-branching", tokens(res.next.t));
    if (res.branch == DriverBranch::splitting_subtree) {
      const auto ph = hat_normalize(psi, t);
      r.check(is_splitting_tree(ph, res.splitting_tree, false), "smc.splitting-subtree", tokens(res.splitting_tree));
      r.check(res.next.t.is_subset_of(res.splitting_tree), "smc.refinement", tokens(res.dagger));
    }
  } else if (what == "pi6") {
    OmegaContext ctx;
    if (phi_name.empty()) {
      SmcScenarioParams p;
      p.seed = s.seed;
      p.tight = true;
      ctx = generate_smc_context(p);
    } else {
      ctx.phi = s.functional(phi_name);
      ctx.a_prefix = BinaryString::from_token(a_tok);
      const auto depth = level_length_profile(ctx.phi, ctx.a_prefix, 0).size();
      std::size_t top = depth;
      while (true) {
        try {
          level_length_profile(ctx.phi, ctx.a_prefix, top);
          ++top;
        } catch (const Error&) {
          break;
        }
      }
      ctx.f = tight ? tight_majorant(ctx.phi, ctx.a_prefix, top - 1) : compute_majorant(ctx.phi, ctx.a_prefix, top - 1);
    }
    r.add(Status::pass, "pi6.context", "a=" + ctx.a_prefix.token() + " f=" + values_text(ctx.f));
    const auto pi = enumerate_pi(ctx, std::min<std::size_t>(2 * ctx.a_prefix.size(), 12)).final_stage();
    r.add(Status::pass, "pi6.pi", tokens(pi));
    std::mt19937_64 rng(item_seed(s.seed, 0));
    const auto ps = stage_pistar_along(ctx, pi, rng, stages, succ);
    const auto vp = validate_pistar(ps, pi);
    r.check(vp.ok, "pi6.pistar", vp.ok ? tokens(ps.stages.final_stage()) : vp.witness);
    const auto res = build_tprime(ctx, pi, ps);
    const auto vt = check_theta(res.theta);
    r.check(vt.ok, "pi6.theta", vt.ok ? std::to_string(res.theta.axioms.size()) + " axioms" : vt.witness);
    const auto& star = ps.stages.final_stage();
    for (const auto& tau : star) {
      std::vector<BinaryString> path;
      for (std::size_t k = 1; k <= tau.size(); ++k) {
        if (star.contains(tau.prefix(k))) path.push_back(tau.prefix(k));
      }
      bool ok = true;
      for (const auto& leaf : members_of_level(res.tprime.at(tau), level_of(star, tau))) {
        ok = ok && theta_chain(res.theta, leaf) == path;
      }
      r.check(ok, "pi6.round-trip." + tau.token(), tokens(res.tprime.at(tau)));
    }
  } else {
    throw Error(ErrorKind::protocol, "unknown command: run " + what);
  }
  return r;
}

Report check_cmd(const std::vector<std::string>& w, const Scenario& s, Report r) {
  const auto& what = w.at(1);
  CLI::App app{what};
  std::string tree_name, sub_name, psi_name, phi_name, path_tok = "e";
  std::size_t budget = 6, stagings = 10;
  bool delayed = false, hat = false;
  app.add_option("--tree", tree_name);
  app.add_option("--sub", sub_name);
  app.add_option("--psi", psi_name);
  app.add_option("--phi", phi_name);
  app.add_option("--path", path_tok);
  app.add_option("--budget", budget);
  app.add_option("--stagings", stagings);
  app.add_flag("--delayed", delayed);
  app.add_flag("--hat", hat);
  parse_options(app, w, 2);
  if (what == "thin") {
    const auto v = thin_violation(s.tree(tree_name), s.tree(sub_name));
    if (!v) {
      r.add(Status::pass, "thin");
    } else {
      r.add(Status::fail, "thin", v->antichain.empty() ? "subset lacks e" : "tau=" + v->tau.token() + " antichain=" + tokens(FiniteTree(v->antichain.begin(), v->antichain.end())) +
                                      " weight=" + v->weight.str());
    }
  } else if (what == "split") {
    const auto v = splitting_violation(s.functional(psi_name), s.tree(tree_name), delayed, hat ? Outputs::hat : Outputs::plain);
    r.check(!v, "split", v ? v->first.token() + "," + v->second.token() : "");
  } else if (what == "weaksplit") {
    const auto& psi = s.functional(psi_name);
    const auto ws = build_weak_splitting_tree(psi, s.functional(phi_name), budget);
    const auto v = check_weak_splitting(ws, psi, BinaryString::from_token(path_tok));
    r.check(v.ok, "weaksplit", v.ok ? tokens(ws.tree) : v.witness);
  } else if (what == "theta") {
    add_items(r, sweep_theta(stagings, s.seed, Exec::parallel), "theta");
  } else {
    throw Error(ErrorKind::protocol, "unknown command: check " + what);
  }
  return r;
}

Report trace_cmd(const std::vector<std::string>& w, const Scenario& s, Report r) {
  const auto& what = w.at(1);
  CLI::App app{what};
  std::string psi_name, sub_name, staged_name;
  std::size_t len = 7, samples = 100;
  app.add_option("--psi", psi_name);
  app.add_option("--sub", sub_name);
  app.add_option("--staged", staged_name);
  app.add_option("--len", len);
  app.add_option("--samples", samples);
  parse_options(app, w, 2);
  if (what == "from-thin") {
    const auto& psi = s.functional(psi_name);
    const auto ts = trace_from_thin(psi, hat_level_tree(psi, len), s.tree(sub_name));
    for (const auto& [n, values] : ts.w) {
      r.check(values.size() <= ts.p.at(n), "from-thin.w" + std::to_string(n), set_text(values));
    }
  } else if (what == "rescale") {
    add_items(r, sweep_rescale(samples, s.seed, Exec::parallel), "rescale");
  } else if (what == "from-split") {
    const auto res = splitting_to_thin(s.staged_tree(staged_name), s.tree(sub_name));
    std::string witness;
    if (res.witness) witness = "pair=" + res.witness->first.token() + "," + res.witness->second.token();
    if (res.violation) witness += (witness.empty() ? "" : " ") + std::string("tau=") + res.violation->tau.token();
    r.check(res.thin_ok, "from-split", witness);
  } else if (what == "dnr") {
    const auto ts = dnr_trace(adversary_from(s));
    for (const auto& [n, values] : ts.w) r.check(values.size() <= 1, "dnr.w" + std::to_string(n), set_text(values));
  } else {
    throw Error(ErrorKind::protocol, "unknown command: trace " + what);
  }
  return r;
}

Report encode_cmd(const std::vector<std::string>& w, Report r) {
  if (w.at(1) != "sd") throw Error(ErrorKind::protocol, "unknown command: encode " + w.at(1));
  CLI::App app{"sd"};
  std::uint64_t n = 0, m = 0;
  app.add_option("n", n)->required();
  app.add_option("m", m)->required();
  parse_options(app, w, 2);
  const auto code = selfdelim_encode(n, m);
  r.check(selfdelim_decode(code) == std::make_pair(n, m), "encode.sd", code.token());
  return r;
}

}  // namespace

const FunctionalTable& Scenario::functional(const std::string& name) const {
  auto it = functionals.find(name);
  if (it == functionals.end()) throw Error(ErrorKind::not_a_member, "no functional named '" + name + "'");
  return it->second;
}

const FiniteTree& Scenario::tree(const std::string& name) const {
  auto it = trees.find(name);
  if (it == trees.end()) throw Error(ErrorKind::not_a_member, "no tree named '" + name + "'");
  return it->second;
}

const StagedTree& Scenario::staged_tree(const std::string& name) const {
  auto it = staged.find(name);
  if (it == staged.end()) throw Error(ErrorKind::not_a_member, "no staged tree named '" + name + "'");
  return it->second;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  enum class Kind { none, functional, tree, staged, params } kind = Kind::none;
  std::string name;
  std::set<std::string> names;
  std::map<std::string, std::vector<std::pair<Axiom, std::size_t>>> axiom_lines;
  bool params_seen = false;
  std::istringstream is{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto w = split_words(raw);
    if (w.empty()) continue;
    if (w[0].front() == '[') {
      std::string header = raw.substr(raw.find('['));
      while (!header.empty() && std::isspace(static_cast<unsigned char>(header.back()))) header.pop_back();
      if (header.back() != ']') syntax(line, "unterminated section header");
      const auto parts = split_words(std::string_view(header).substr(1, header.size() - 2));
      if (parts.size() == 1 && parts[0] == "params") {
        if (params_seen) syntax(line, "duplicate [params] section");
        params_seen = true;
        kind = Kind::params;
        continue;
      }
      if (parts.size() != 2) syntax(line, "bad section header " + header);
      if (parts[0] == "functional") {
        kind = Kind::functional;
      } else if (parts[0] == "tree") {
        kind = Kind::tree;
      } else if (parts[0] == "staged") {
        kind = Kind::staged;
      } else {
        syntax(line, "unknown section " + parts[0]);
      }
      name = parts[1];
      if (!names.insert(name).second) syntax(line, "duplicate name " + name);
      if (kind == Kind::functional) s.functionals[name];
      if (kind == Kind::tree) s.trees[name];
      if (kind == Kind::staged) s.staged[name];
      continue;
    }
    switch (kind) {
      case Kind::none:
        syntax(line, "content outside a section");
      case Kind::functional: {
        if (w[0] != "axiom" || w.size() != 5) syntax(line, "expected: axiom SIGMA ARG VALUE STEPS");
        Axiom a{parse_sigma(line, w[1]), parse_int<std::uint64_t>(line, w[2]), parse_int<std::uint64_t>(line, w[3]),
                parse_int<std::uint64_t>(line, w[4])};
        if (a.steps == 0) syntax(line, "STEPS must be at least 1");
        auto& prior = axiom_lines[name];
        for (const auto& [b, at] : prior) {
          if (b.arg == a.arg && b.value != a.value && b.sigma.compatible_with(a.sigma)) {
            throw Error(ErrorKind::consistency, "line " + std::to_string(line) + " (axiom " + axiom_text(a) +
                                                    ") conflicts with line " + std::to_string(at) + " (axiom " +
                                                    axiom_text(b) + ")");
          }
        }
        prior.push_back({a, line});
        s.functionals[name].add(a);
        break;
      }
      case Kind::tree:
        if (w[0] != "node" || w.size() != 2) syntax(line, "expected: node SIGMA");
        s.trees[name].insert(parse_sigma(line, w[1]));
        break;
      case Kind::staged: {
        auto& st = s.staged[name];
        if (w[0] == "stage" && w.size() == 1) {
          st.stages.push_back(st.stages.empty() ? FiniteTree{} : st.stages.back());
        } else if (w[0] == "node" && w.size() == 2) {
          if (st.stages.empty()) syntax(line, "node before the first stage");
          st.stages.back().insert(parse_sigma(line, w[1]));
        } else {
          syntax(line, "expected: stage | node SIGMA");
        }
        break;
      }
      case Kind::params:
        if (w.size() != 2) syntax(line, "expected: KEY VALUE");
        if (w[0] == "seed") {
          s.seed = parse_int<std::uint64_t>(line, w[1]);
        } else {
          if (s.params.count(w[0])) syntax(line, "duplicate parameter " + w[0]);
          s.params[w[0]] = parse_int<std::int64_t>(line, w[1]);
        }
        break;
    }
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "[params]\nseed " << s.seed << "\n";
  for (const auto& [k, v] : s.params) os << k << " " << v << "\n";
  for (const auto& [name, f] : s.functionals) {
    os << "[functional " << name << "]\n";
    for (const auto& a : f.axioms()) os << "axiom " << axiom_text(a) << "\n";
  }
  for (const auto& [name, t] : s.trees) {
    os << "[tree " << name << "]\n";
    for (const auto& x : t) os << "node " << x.token() << "\n";
  }
  for (const auto& [name, st] : s.staged) {
    os << "[staged " << name << "]\n";
    const FiniteTree* prev = nullptr;
    for (const auto& stage : st.stages) {
      os << "stage\n";
      for (const auto& x : stage) {
        if (!prev || !prev->contains(x)) os << "node " << x.token() << "\n";
      }
      prev = &stage;
    }
  }
  return os.str();
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "PASS";
    case Status::fail:
      return "FAIL";
    case Status::error:
      return "ERROR";
  }
  return "ERROR";
}

void Report::add(Status status, std::string check_id, std::string witness) {
  lines.push_back({status, std::move(check_id), std::move(witness)});
}

void Report::check(bool ok, std::string check_id, std::string witness) {
  add(ok ? Status::pass : Status::fail, std::move(check_id), std::move(witness));
}

bool Report::ok() const {
  return std::all_of(lines.begin(), lines.end(), [](const ReportLine& l) { return l.status == Status::pass; });
}

std::string Report::render() const {
  std::ostringstream os;
  os << "# command: " << command << "\n# seed: " << seed << "\n";
  for (const auto& l : lines) os << to_string(l.status) << "\t" << l.check_id << "\t" << l.witness << "\n";
  return os.str();
}

std::string tokens(const FiniteTree& t) {
  std::string out;
  for (const auto& x : t) out += (out.empty() ? "" : ",") + x.token();
  return out;
}

Report run_command(const std::string& cmd, const Scenario& scenario) {
  const auto w = split_words(cmd);
  if (w.size() < 2) throw Error(ErrorKind::protocol, "unknown command: " + cmd);
  Report r;
  r.command = cmd;
  r.seed = scenario.seed;
  if (w[0] == "suite") {
    if (w.size() > 3 || (w.size() == 3 && w[2] != "--inject-mutant")) throw Error(ErrorKind::format, "suite: unexpected arguments");
    SuiteOptions opts{scenario.seed, w.size() == 3};
    if (w[1] == "fast") return run_suite(SuiteLevel::fast, opts);
    if (w[1] == "full") return run_suite(SuiteLevel::full, opts);
    throw Error(ErrorKind::protocol, "unknown command: " + cmd);
  }
  using Handler = Report (*)(const std::vector<std::string>&, const Scenario&, Report);
  static const std::map<std::string, Handler> groups{
      {"verify", verify_cmd}, {"run", run_cmd}, {"check", check_cmd}, {"trace", trace_cmd}};
  if (w[0] == "encode") {
    try {
      return encode_cmd(w, r);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::protocol) throw;
      r.add(Status::error, w[0] + "." + w[1], std::string(to_string(e.kind())) + ": " + e.what());
      return r;
    }
  }
  auto it = groups.find(w[0]);
  if (it == groups.end()) throw Error(ErrorKind::protocol, "unknown command: " + cmd);
  try {
    return it->second(w, scenario, r);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::protocol) throw;
    r.add(Status::error, w[0] + "." + w[1], std::string(to_string(e.kind())) + ": " + e.what());
    return r;
  }
}

Report run_suite(SuiteLevel level, const SuiteOptions& opts) {
  Report r;
  r.command = level == SuiteLevel::fast ? "suite fast" : "suite full";
  if (opts.inject_mutant) r.command += " --inject-mutant";
  r.seed = opts.seed;
  const bool full = level == SuiteLevel::full;
  const auto seed = opts.seed;
  const auto P = Exec::parallel;
  auto guarded = [&](const std::string& id, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const Error& e) {
      r.add(Status::error, id, std::string(to_string(e.kind())) + ": " + e.what());
    }
  };

  guarded("c1.twocol", [&] {
    for (std::size_t n = 0; n <= (full ? 2u : 1u); ++n) {
      add_summary(r, twocol_sweep(n, true, 0, seed, opts.inject_mutant), "c1.twocol.exhaustive.n" + std::to_string(n));
    }
    add_summary(r, twocol_sweep(full ? 3 : 2, false, full ? 10000 : 200, seed, opts.inject_mutant),
                full ? "c1.twocol.sampled.n3" : "c1.twocol.sampled.n2");
  });
  guarded("c2.nice", [&] {
    for (std::size_t i = 0; i <= 2; ++i) {
      for (std::size_t n = 0; n <= i + 2; ++n) {
        if (!full && n > i + 1) continue;
        add_summary(r, sweep_nice_sampled(i, n, full ? 10000 : 100, seed, P),
                    "c2.nice.i" + std::to_string(i) + ".n" + std::to_string(n));
      }
    }
    add_summary(r, sweep_kappa(6, 10), "c2.kappa.closed-form");
    r.check(kappa(0, 0) == 4, "c2.kappa.base", std::to_string(kappa(0, 0)));
  });
  guarded("c3.pi-member", [&] {
    const auto corpus = adversary_corpus(seed, full ? 120 : 12);
    add_summary(r, sweep_pi_members(corpus, full ? 3 : 2, P), "c3.pi-member.corpus");
    const auto level1 = pi_star_successors(root_node());
    r.check(level1.size() == 12, "c3.pi-star.level1-size", std::to_string(level1.size()));
  });
  guarded("c4.traceable", [&] {
    add_summary(r, sweep_traceable(full ? 100 : 5, full ? 8 : 5, seed, P), "c4.traceable.runs");
    bool identity = true;
    for (std::size_t n = 0; n <= 8; ++n) identity = identity && 2 * (n + 2) * node_bound(n) == node_bound(n + 1);
    r.check(identity, "c4.traceable.counting-identity", "n<=8");
  });
  guarded("c5.thin", [&] {
    const std::size_t count = full ? 1000 : 50;
    add_summary(r, sweep_trace_from_thin(count, seed, P), "c5.thin.trace-from-thin");
    add_summary(r, sweep_thin_from_trace(count, seed, P), "c5.thin.thin-from-trace");
    add_summary(r, sweep_rescale(count, seed, P), "c5.thin.rescale");
    add_summary(r, sweep_selfdelim(full ? 64 : 16, full ? 64 : 16), "c5.thin.selfdelim");
    const auto partial = spaced_bound_partial_sum(0, 40);
    r.check(partial < Rational(4, 9) && Rational(4, 9) - partial < Rational(1, 1000000000), "c5.thin.four-ninths",
            partial.str());
  });
  guarded("c6.splittree", [&] { add_summary(r, sweep_splittree(full ? 1000 : 50, seed, P), "c6.splittree"); });
  guarded("c7.selection", [&] { add_summary(r, sweep_selection(full ? 60 : 5, seed, P), "c7.selection"); });
  guarded("c8.theta", [&] { add_summary(r, sweep_theta(full ? 50 : 5, seed, P), "c8.theta"); });
  guarded("c9.trelem1", [&] { add_summary(r, sweep_trelem1(full ? 1000 : 50, seed, P), "c9.trelem1"); });

  std::stable_sort(r.lines.begin(), r.lines.end(),
                   [](const ReportLine& a, const ReportLine& b) { return a.check_id < b.check_id; });
  return r;
}

}  // namespace pi01
