// nsbell command-line interface: every library operation behind stable,
// scriptable JSON/CSV I/O. Commands compose by streaming the JSON tensor
// format through stdin/stdout. Exit codes: 0 success, 2 budget refusal,
// 3 invalid input, 1 internal failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nsbell/nsbell.hpp>

namespace {

using nsbell::Json;

struct CliState {
  std::string input = "-";  // path, "-" for stdin, or inline JSON ("{...}")
  std::string output;       // path; empty = stdout
  std::string format = "json";
  std::uint64_t seed = 0;
  nsbell::Budgets budgets;
  long max_pivots = 500000;
  std::function<std::string()> run;  // set by whichever leaf command parsed
};

Json read_json_input(const std::string& spec) {
  std::string text;
  if (!spec.empty() && spec.front() == '{') {
    text = spec;
  } else if (spec == "-" || spec.empty()) {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(spec);
    if (!f) throw std::invalid_argument("cannot open input file: " + spec);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("input is not valid JSON: ") + e.what());
  }
}

nsbell::Tensor4 read_tensor(const CliState& st) { return nsbell::tensor_from_json(read_json_input(st.input)); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json value_payload(const nsbell::Rational& v) {
  return Json{{"value", v.str()}, {"decimal", v.decimal()}};
}

void emit(const CliState& st, const std::string& payload) {
  if (st.output.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(st.output, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + st.output);
  f << payload;
}

std::string run_norm(const CliState& st, const std::string& kind) {
  if (kind == "nsg") {
    const auto r = nsbell::nsg_from_json(read_json_input(st.input));
    return dump(value_payload(nsbell::nsg_norm(r)));
  }
  const auto t = read_tensor(st);
  nsbell::Rational v;
  if (kind == "ns")
    v = nsbell::norm_ns(t);
  else if (kind == "bns1")
    v = nsbell::norm_bns1(t);
  else if (kind == "bns2")
    v = nsbell::norm_bns2(t);
  else if (kind == "dual1")
    v = nsbell::dual_norm1(t);
  else if (kind == "dual2")
    v = nsbell::dual_norm2(t);
  else if (kind == "dns")
    v = nsbell::dns_norm(t, st.budgets.lp).value;
  else
    throw std::invalid_argument("unknown norm kind: " + kind);
  return dump(value_payload(v));
}

std::string run_value(const CliState& st, const std::string& kind) {
  const auto t = read_tensor(st);
  if (kind == "classical") {
    const auto r = nsbell::classical_value(t, st.budgets);
    Json j = value_payload(r.value);
    j["strategy"] = nsbell::strategy_to_json(r.strategy);
    return dump(j);
  }
  if (kind == "ns") {
    const auto r = nsbell::ns_value(t, st.budgets.lp);
    Json j = value_payload(r.value);
    j["attaining"] = nsbell::tensor_to_json(r.attaining);
    return dump(j);
  }
  if (kind == "dns") {
    const auto c = nsbell::dns_norm(t, st.budgets.lp);
    return dump(nsbell::dns_certificate_to_json(c));
  }
  throw std::invalid_argument("unknown value kind: " + kind);
}

std::string run_member(const CliState& st, const std::string& kind, const std::string& scale) {
  const auto t = read_tensor(st);
  if (kind == "c") return dump(Json{{"member", nsbell::membership_c(t)}});
  if (kind == "ns") return dump(Json{{"member", nsbell::membership_ns(t)}});
  if (kind == "snos") return dump(Json{{"member", nsbell::membership_snos(t)}});
  if (kind == "ans") {
    const auto m = nsbell::membership_ans(t);
    Json j{{"member", m.has_value()}};
    if (m) j["marginals"] = nsbell::marginals_to_json(*m);
    return dump(j);
  }
  if (kind == "colocal") {
    const auto s = nsbell::Rational::from_string(scale);
    const bool ok = nsbell::membership_co_local(t, s, st.budgets);
    return dump(Json{{"member", ok}, {"scale", s.str()}});
  }
  throw std::invalid_argument("unknown membership kind: " + kind);
}

std::string run_corr(const CliState& st, const std::string& kind) {
  const nsbell::CorrelationMatrix t(nsbell::matrix_from_json(read_json_input(st.input)));
  nsbell::Rational v;
  if (kind == "pi")
    v = nsbell::corr_pi_norm(t);
  else if (kind == "eps")
    v = nsbell::corr_eps_norm(t, st.budgets);
  else if (kind == "lv")
    v = nsbell::corr_lv_ratio(t, st.budgets);
  else
    throw std::invalid_argument("unknown correlation kind: " + kind);
  return dump(value_payload(v));
}

std::string run_game_value(const CliState& st, const std::string& kind) {
  const Json j = read_json_input(st.input);
  const bool is_perm = j.contains("sigmas");
  const bool is_xord = j.contains("sigma") && j.contains("d");
  if (!is_perm && !is_xord)
    throw std::invalid_argument("game value: input is neither a permutation nor an XOR-d game");
  if (kind == "ns") {
    const auto r = is_perm ? nsbell::perm_game_ns_value(nsbell::perm_game_from_json(j))
                           : nsbell::xor_d_ns_value(nsbell::xor_d_game_from_json(j));
    return dump(value_payload(r.value));
  }
  if (kind == "classical") {
    if (is_perm) {
      const auto g = nsbell::perm_game_from_json(j);
      const auto r = nsbell::perm_game_classical_value(g, st.budgets);
      Json out = value_payload(nsbell::Rational(r.value));
      out["strategy"] = nsbell::strategy_to_json(r.strategy);
      out["greedy_lower_bound"] = nsbell::perm_game_greedy_lower_bound(g);
      return dump(out);
    }
    const auto r = nsbell::classical_value(nsbell::xor_d_tensor(nsbell::xor_d_game_from_json(j)),
                                           st.budgets);
    Json out = value_payload(r.value);
    out["strategy"] = nsbell::strategy_to_json(r.strategy);
    return dump(out);
  }
  if (kind == "dns") {
    const auto t = is_perm ? nsbell::perm_game_tensor(nsbell::perm_game_from_json(j))
                           : nsbell::xor_d_tensor(nsbell::xor_d_game_from_json(j));
    const auto c = nsbell::dns_norm(t, st.budgets.lp);
    return dump(value_payload(c.value));
  }
  throw std::invalid_argument("unknown game value kind: " + kind);
}

std::vector<std::pair<int, int>> parse_scenarios(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw std::invalid_argument("scenario must look like 2x2");
    out.emplace_back(std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1)));
  }
  if (out.empty()) throw std::invalid_argument("no scenarios given");
  return out;
}

std::string run_verify(const CliState& st) {
  const auto t = read_tensor(st);
  Json checks = Json::array();
  bool all = true;
  const auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
    Json c{{"name", name}, {"pass", pass}};
    if (!detail.empty()) c["detail"] = detail;
    checks.push_back(std::move(c));
    all = all && pass;
  };

  add("flip_involution", nsbell::flip(nsbell::flip(t)) == t);
  add("norm_flip_identity", nsbell::norm_bns2(t) == nsbell::norm_bns1(nsbell::flip(t)));
  const auto nrm = nsbell::norm_ns(t);
  if (nsbell::membership_c(t))
    add("nscb_characterization", nsbell::membership_ns(t) == (nrm == nsbell::Rational(1)),
        "norm_ns = " + nrm.str());
  const auto dns = nsbell::dns_norm(t, st.budgets.lp);
  const auto dual = nsbell::dns_norm_dual(t, st.budgets.lp);
  add("dns_duality", dns.value == dual, "dns = " + dns.value.str());
  add("dns_trivial_splits",
      dns.value <= nsbell::dual_norm1(t) && dns.value <= nsbell::dual_norm2(t));
  if (t.nonnegative()) {
    const auto ns = nsbell::ns_value(t, st.budgets.lp);
    add("nonneg_value_duality", ns.value == dns.value, "omega_NS = " + ns.value.str());
    add("snos_membership_norm", nsbell::membership_snos(t) == (nrm <= nsbell::Rational(1)));
    if (!nrm.is_zero()) {
      const auto comp = nsbell::snos_complete(t);
      bool dominates = true;
      for (std::size_t i = 0; i < t.size(); ++i)
        dominates = dominates && t.at_linear(i) <= comp.at_linear(i);
      add("snos_completion",
          dominates && nsbell::membership_ns((nsbell::Rational(1) / nrm) * comp));
    }
  }
  if (const auto marg = nsbell::membership_ans(t)) {
    const auto rp = nsbell::positive_part(t);
    const auto rm = -nsbell::negative_part(t);
    add("ans_norm_additivity", nrm == nsbell::norm_ns(rp) + nsbell::norm_ns(rm));
    add("ans_norm_difference", nsbell::norm_ns(rp) - nsbell::norm_ns(rm) == marg->total);
    const auto split = nsbell::ans_split(t);
    add("ans_split_reconstruction",
        split.lam * split.pos - split.mu * split.neg == t &&
            split.lam + split.mu == nrm && split.lam - split.mu == marg->total);
    if (t.dims().square()) {
      const auto w = nsbell::map_t(t);
      const auto back = nsbell::map_t_inv(w);
      add("bm_roundtrip", back == t);
      add("bm_contraction", nsbell::bm_image_norm(w) <= nrm);
      const auto asum = nsbell::alpha_map(1, w) + nsbell::alpha_map(2, w) +
                        nsbell::alpha_map(3, w) + nsbell::alpha_map(4, w);
      add("bm_alpha_sum", asum == back);
    }
  }
  Json out{{"checks", std::move(checks)}, {"all_pass", all}};
  if (!all) {
    emit(st, dump(out));
    throw std::runtime_error("verify: at least one invariant failed");
  }
  return dump(out);
}

}  // namespace

int main(int argc, char** argv) {
  CliState st;
  CLI::App app{"exact norms, values and decompositions of non-signalling Bell tensors"};
  app.require_subcommand(1);
  app.add_option("--output", st.output, "write the result to a file instead of stdout");
  app.add_option("--max-strategies", st.budgets.max_strategies,
                 "enumeration budget (strategies / hull vertices)")
      ->envname("NSBELL_MAX_STRATEGIES");
  app.add_option("--max-pivots", st.max_pivots, "simplex pivot cap")->envname("NSBELL_MAX_PIVOTS");
  app.add_option("--threads", st.budgets.threads, "worker thread cap (0 = hardware)");

  const auto add_input = [&st](CLI::App* cmd) {
    cmd->add_option("input", st.input, "input file, '-' for stdin, or inline JSON");
  };

  // norm {ns|bns1|bns2|dual1|dual2|dns|nsg}
  auto* norm = app.add_subcommand("norm", "tensor and matrix norms");
  for (const std::string kind : {"ns", "bns1", "bns2", "dual1", "dual2", "dns", "nsg"}) {
    auto* c = norm->add_subcommand(kind);
    add_input(c);
    c->callback([&st, kind] { st.run = [&st, kind] { return run_norm(st, kind); }; });
  }
  norm->require_subcommand(1);

  // value {classical|ns|dns}
  auto* value = app.add_subcommand("value", "classical, non-signalling and DNS values");
  for (const std::string kind : {"classical", "ns", "dns"}) {
    auto* c = value->add_subcommand(kind);
    add_input(c);
    c->callback([&st, kind] { st.run = [&st, kind] { return run_value(st, kind); }; });
  }
  value->require_subcommand(1);

  // member {c|ns|ans|snos|colocal}
  auto* member = app.add_subcommand("member", "membership predicates");
  auto scale = std::make_shared<std::string>("1");
  for (const std::string kind : {"c", "ns", "ans", "snos", "colocal"}) {
    auto* c = member->add_subcommand(kind);
    add_input(c);
    if (kind == "colocal")
      c->add_option("--scale", *scale, "membership of input/scale in co(L u -L)");
    c->callback([&st, kind, scale] {
      st.run = [&st, kind, scale] { return run_member(st, kind, *scale); };
    });
  }
  member->require_subcommand(1);

  // complete-snos
  auto* complete = app.add_subcommand("complete-snos", "NS completion of a nonnegative tensor");
  add_input(complete);
  complete->callback([&st] {
    st.run = [&st] { return dump(nsbell::tensor_to_json(nsbell::snos_complete(read_tensor(st)))); };
  });

  // decompose {ans|nsg}
  auto* decompose = app.add_subcommand("decompose", "constructive decompositions");
  {
    auto* c = decompose->add_subcommand("ans");
    add_input(c);
    c->callback([&st] {
      st.run = [&st] { return dump(nsbell::ans_split_to_json(nsbell::ans_split(read_tensor(st)))); };
    });
    auto* c2 = decompose->add_subcommand("nsg");
    add_input(c2);
    c2->callback([&st] {
      st.run = [&st] {
        const auto r = nsbell::nsg_from_json(read_json_input(st.input));
        return dump(nsbell::nsg_split_to_json(nsbell::nsg_decompose(r)));
      };
    });
  }
  decompose->require_subcommand(1);

  // map {t|tinv}
  auto* mapc = app.add_subcommand("map", "the direct-sum isomorphism and its inverse");
  {
    auto* c = mapc->add_subcommand("t");
    add_input(c);
    c->callback([&st] {
      st.run = [&st] { return dump(nsbell::bm_image_to_json(nsbell::map_t(read_tensor(st)))); };
    });
    auto* c2 = mapc->add_subcommand("tinv");
    add_input(c2);
    c2->callback([&st] {
      st.run = [&st] {
        const auto w = nsbell::bm_image_from_json(read_json_input(st.input));
        return dump(nsbell::tensor_to_json(nsbell::map_t_inv(w)));
      };
    });
  }
  mapc->require_subcommand(1);

  // corr {pi|eps|lv}
  auto* corr = app.add_subcommand("corr", "correlation-matrix norms and ratio");
  for (const std::string kind : {"pi", "eps", "lv"}) {
    auto* c = corr->add_subcommand(kind);
    add_input(c);
    c->callback([&st, kind] { st.run = [&st, kind] { return run_corr(st, kind); }; });
  }
  corr->require_subcommand(1);

  // game {gen-perm|gen-xord|value}
  auto* game = app.add_subcommand("game", "random permutation and XOR-d games");
  auto gn = std::make_shared<int>(2);
  auto gd = std::make_shared<int>(2);
  {
    auto* c = game->add_subcommand("gen-perm", "seeded random permutation game");
    c->add_option("--n", *gn, "inputs = outputs")->required();
    c->add_option("--seed", st.seed, "PRNG seed")->required();
    c->callback([&st, gn] {
      st.run = [&st, gn] {
        return dump(nsbell::perm_game_to_json(nsbell::gen_perm_game(*gn, st.seed)));
      };
    });
    auto* c2 = game->add_subcommand("gen-xord", "seeded random XOR-d game");
    c2->add_option("--n", *gn, "inputs per party")->required();
    c2->add_option("--d", *gd, "cyclic answer group size")->required();
    c2->add_option("--seed", st.seed, "PRNG seed")->required();
    c2->callback([&st, gn, gd] {
      st.run = [&st, gn, gd] {
        return dump(nsbell::xor_d_game_to_json(nsbell::gen_xor_d_game(*gn, *gd, st.seed)));
      };
    });
    auto* c3 = game->add_subcommand("value", "value of a generated game");
    auto kind = std::make_shared<std::string>("ns");
    c3->add_option("--kind", *kind, "classical | ns | dns")->required();
    add_input(c3);
    c3->callback([&st, kind] { st.run = [&st, kind] { return run_game_value(st, *kind); }; });
  }
  game->require_subcommand(1);

  // experiment {chernoff|bound-sweep}
  auto* experiment = app.add_subcommand("experiment", "seeded experiment reports");
  auto trials = std::make_shared<int>(100);
  auto samples = std::make_shared<int>(20);
  auto scenarios = std::make_shared<std::string>("2x2");
  {
    auto* c = experiment->add_subcommand("chernoff", "random-game classical-value statistics");
    c->add_option("--n", *gn, "game size (N = K)")->required();
    c->add_option("--trials", *trials, "number of independent games")->required();
    c->add_option("--seed", st.seed, "master seed")->required();
    c->add_option("--format", st.format, "json | csv");
    c->callback([&st, gn, trials] {
      st.run = [&st, gn, trials] {
        const auto rep = nsbell::chernoff_experiment(*gn, *trials, st.seed, st.budgets);
        return st.format == "csv" ? nsbell::experiment_report_to_csv(rep)
                                  : dump(nsbell::experiment_report_to_json(rep));
      };
    });
    auto* c2 = experiment->add_subcommand("bound-sweep", "sampled upper-bound checks");
    c2->add_option("--scenarios", *scenarios, "comma-separated NxK list, e.g. 2x2,3x3")->required();
    c2->add_option("--samples", *samples, "samples per scenario and kind")->required();
    c2->add_option("--seed", st.seed, "master seed")->required();
    c2->add_option("--format", st.format, "json | csv");
    c2->callback([&st, scenarios, samples] {
      st.run = [&st, scenarios, samples] {
        const auto rep = nsbell::bound_sweep(parse_scenarios(*scenarios), *samples, st.seed,
                                             st.budgets);
        return st.format == "csv" ? nsbell::bound_sweep_to_csv(rep)
                                  : dump(nsbell::bound_sweep_to_json(rep));
      };
    });
  }
  experiment->require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suite on a tensor");
  add_input(verify);
  verify->callback([&st] { st.run = [&st] { return run_verify(st); }; });

  try {
    app.parse(argc, argv);
    st.budgets.lp.max_pivots = st.max_pivots;
    if (!st.run) throw std::invalid_argument("no command selected");
    emit(st, st.run());
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  } catch (const nsbell::BudgetExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
