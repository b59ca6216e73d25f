#include "cforge/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>

#include "cforge/blackbox.hpp"
#include "cforge/delta_solver.hpp"
#include "cforge/dimacs.hpp"
#include "cforge/exact.hpp"
#include "cforge/generators.hpp"
#include "cforge/io.hpp"
#include "cforge/linear.hpp"
#include "cforge/oracle.hpp"
#include "cforge/transform.hpp"

namespace cforge::cli {

namespace {

using io::json;

struct Globals {
  std::uint64_t seed = 0;
  double tol = kICTolerance;
  bool allow_no_free_action = false;
};

// Raised by handlers that completed but must report infeasibility.
struct Infeasible {
  json body;
};

json provenance(const std::string& command, const Globals& g, json params) {
  return {{"tool", "contract-forge"}, {"version", kVersion}, {"command", command},
          {"seed", g.seed},          {"tol", g.tol},        {"parameters", std::move(params)}};
}

Setting load_setting(const std::string& path, const Globals& g) {
  return io::setting_from_json(io::read_json(path), g.allow_no_free_action);
}

const ProductSetting& need_product(const Setting& s, const char* command) {
  if (const auto* p = std::get_if<ProductSetting>(&s)) return *p;
  throw ArgumentError(std::string(command) + " needs a product setting");
}

json choice_json(const AgentChoice& c) {
  return {{"action", c.action}, {"agent_utility", c.agent_utility}, {"principal_payoff", c.principal_payoff}};
}

json doubles(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(io::number(x));
  return out;
}

json delta_result_json(const DeltaSolveResult& r) {
  json cuts = json::array();
  for (Outcome s : r.cut_outcomes) cuts.push_back(io::outcome_to_json(s));
  return {{"action", r.action},
          {"contract", io::to_json(Contract(r.contract))},
          {"expected_payment", r.expected_payment},
          {"gamma_star", r.gamma_star},
          {"eps_search", r.eps_search},
          {"scale", r.scale},
          {"cuts", std::move(cuts)},
          {"decisions", r.decisions},
          {"lp_solves", r.lp_solves},
          {"base_lift", r.base_lift}};
}

std::string items_field(Outcome s) {
  std::string out;
  for (std::size_t j : s.items()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(j);
  }
  return out;
}

std::string num(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void write_output(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw ArgumentError("cannot write '" + path + "'");
  f << doc.dump(2) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contract design solvers for principal-agent settings", "contract-forge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--tol", g.tol, "Tolerance for incentive checks")->capture_default_str();
  app.add_flag("--allow-no-free-action", g.allow_no_free_action, "Accept instances whose first action has cost > 0");
  app.fallthrough();

  std::function<json()> handler;
  std::string command;

  // solve
  auto* solve = app.add_subcommand("solve", "Exact optimal (delta-IC) contract by linear programming");
  std::string solve_instance = "-", solve_notion = "mult";
  double solve_delta = 0.0;
  std::optional<std::size_t> solve_action;
  solve->add_option("--instance", solve_instance, "Instance JSON ('-' for stdin)");
  solve->add_option("--delta", solve_delta, "Approximation parameter");
  solve->add_option("--notion", solve_notion, "mult|add");
  solve->add_option("--action", solve_action, "Only compute the cheapest contract for this action");
  solve->callback([&] {
    command = "solve";
    handler = [&]() -> json {
      const Setting s = load_setting(solve_instance, g);
      const ICNotion notion = parse_notion(solve_notion);
      json params = {{"instance", solve_instance}, {"delta", solve_delta}, {"notion", solve_notion}};
      if (solve_action) {
        params["action"] = *solve_action;
        if (*solve_action >= num_actions(s)) throw ArgumentError("action out of range");
        const MinPaymentResult r = std::visit(
            [&](const auto& x) { return min_payment(x, *solve_action, solve_delta, notion); }, s);
        json body = {{"provenance", provenance("solve", g, params)},
                     {"action", r.action},
                     {"implementable", r.status == Implementability::Implementable},
                     {"expected_payment", io::number(r.expected_payment)}};
        if (r.status != Implementability::Implementable) throw Infeasible{body};
        body["contract"] = io::to_json(Contract(r.contract));
        body["ic_slack"] = ic_slack(s, r.contract, r.action, solve_delta, notion);
        return body;
      }
      const OptContractResult r = opt_contract(s, solve_delta, notion);
      return {{"provenance", provenance("solve", g, params)},
              {"payoff", r.payoff},
              {"action", r.action},
              {"contract", io::to_json(r.contract)},
              {"action_payoffs", doubles(r.action_payoffs)},
              {"ic_slack", ic_slack(s, r.contract, r.action, solve_delta, notion)},
              {"first_best", first_best(s)}};
    };
  });

  // delta-solve
  auto* dsolve = app.add_subcommand("delta-solve", "Multiplicative delta-IC contract via separation oracle cuts");
  std::string ds_instance = "-", ds_method = "cuts", ds_trace;
  double ds_delta = 0.0, ds_eps = 0.0;
  std::optional<std::size_t> ds_action;
  dsolve->add_option("--instance", ds_instance, "Product instance JSON");
  dsolve->add_option("--delta", ds_delta, "delta > 0")->required();
  dsolve->add_option("--action", ds_action, "Target action (default: best over all actions)");
  dsolve->add_option("--method", ds_method, "cuts|ellipsoid");
  dsolve->add_option("--eps-search", ds_eps, "Binary search width (default 1e-6 R_i)");
  dsolve->add_option("--trace", ds_trace, "Write per-iteration CSV to this file ('-' for stderr)");
  dsolve->callback([&] {
    command = "delta-solve";
    handler = [&]() -> json {
      const Setting s = load_setting(ds_instance, g);
      const ProductSetting& p = need_product(s, "delta-solve");
      DeltaOptions opt;
      opt.method = parse_method(ds_method);
      opt.eps_search = ds_eps;
      std::ofstream trace_file;
      std::ostream* trace = nullptr;
      if (!ds_trace.empty()) {
        if (ds_trace == "-") {
          trace = &err;
        } else {
          trace_file.open(ds_trace);
          if (!trace_file) throw ArgumentError("cannot write '" + ds_trace + "'");
          trace = &trace_file;
        }
        *trace << "action,step,gamma,value,lambda_sum,event,cut,cut_ratio,lambda\n";
        opt.trace = [trace](const TraceRow& row) {
          std::string lam;
          for (double x : row.lambda) lam += (lam.empty() ? "" : ";") + num(x);
          *trace << row.action << ',' << row.step << ',' << num(row.gamma) << ',' << num(row.value) << ','
                 << num(row.lambda_sum) << ',' << row.event << ',' << (row.cut ? items_field(*row.cut) : "")
                 << ',' << (row.cut ? num(row.cut_ratio) : "") << ',' << lam << '\n';
        };
      }
      json params = {{"instance", ds_instance}, {"delta", ds_delta}, {"method", ds_method}, {"eps_search", ds_eps}};
      if (ds_action) {
        params["action"] = *ds_action;
        const DeltaSolveResult r = min_payment_delta(p, *ds_action, ds_delta, opt);
        json body = delta_result_json(r);
        body["ic_slack"] = ic_slack(s, r.contract, r.action, ds_delta, ICNotion::Multiplicative);
        body["provenance"] = provenance("delta-solve", g, params);
        return body;
      }
      std::vector<DeltaSolveResult> per;
      const OptContractResult r = opt_contract_delta(p, ds_delta, opt, &per);
      json actions = json::array();
      for (const auto& x : per) actions.push_back(delta_result_json(x));
      return {{"provenance", provenance("delta-solve", g, params)},
              {"payoff", r.payoff},
              {"action", r.action},
              {"contract", io::to_json(r.contract)},
              {"ic_slack", ic_slack(s, r.contract, r.action, ds_delta, ICNotion::Multiplicative)},
              {"per_action", std::move(actions)}};
    };
  });

  // linear
  auto* lin = app.add_subcommand("linear", "Linear and separable contracts");
  std::string lin_instance = "-";
  double lin_delta = 0.0;
  std::optional<double> lin_gamma;
  bool lin_separable = false;
  lin->add_option("--instance", lin_instance, "Instance JSON");
  lin->add_option("--delta", lin_delta, "Additive delta");
  lin->add_option("--gamma", lin_gamma, "Run the geometric-interval approximation with this gamma");
  lin->add_flag("--separable", lin_separable, "Optimal separable contract instead");
  lin->callback([&] {
    command = "linear";
    handler = [&]() -> json {
      const Setting s = load_setting(lin_instance, g);
      json params = {{"instance", lin_instance}, {"delta", lin_delta}, {"separable", lin_separable}};
      if (lin_gamma) params["gamma"] = *lin_gamma;
      json body = {{"provenance", provenance("linear", g, params)}};
      if (lin_separable) {
        const SeparableChoice r = optimal_separable(need_product(s, "linear --separable"), lin_delta);
        body["contract"] = io::to_json(Contract(SeparableContract{r.item_payments}));
        body["action"] = r.action;
        body["payoff"] = r.payoff;
        return body;
      }
      const Envelope env = upper_envelope(s);
      json segs = json::array();
      for (const auto& seg : env.segments) {
        segs.push_back({{"action", seg.action}, {"left", seg.left}, {"right", seg.right}});
      }
      body["envelope"] = std::move(segs);
      if (lin_gamma) {
        const LinearApproxResult r = approx_linear_delta(s, lin_delta, *lin_gamma);
        json cands = json::array();
        for (const auto& c : r.candidates) {
          cands.push_back({{"alpha", c.alpha}, {"action", c.action}, {"payoff", c.payoff},
                           {"interval", c.interval}, {"delta_ic", c.delta_ic}});
        }
        body["contract"] = io::to_json(Contract(LinearContract{r.alpha}));
        body["action"] = r.action;
        body["payoff"] = r.payoff;
        body["kappa"] = r.kappa;
        body["guarantee"] = r.guarantee;
        body["first_best"] = r.welfare;
        body["candidates"] = std::move(cands);
        body["ic_slack"] = ic_slack(s, LinearContract{r.alpha}, r.action, lin_delta, ICNotion::Additive);
        return body;
      }
      const LinearChoice r = optimal_linear(s, lin_delta);
      body["contract"] = io::to_json(Contract(LinearContract{r.alpha}));
      body["action"] = r.action;
      body["payoff"] = r.payoff;
      return body;
    };
  });

  // oracle
  auto* orc = app.add_subcommand("oracle", "Minimum likelihood-ratio outcome (separation oracle)");
  std::string orc_instance = "-";
  double orc_eps = 0.1;
  bool orc_brute = false;
  orc->add_option("--instance", orc_instance, "Separation instance JSON");
  orc->add_option("--eps", orc_eps, "FPTAS accuracy in (0,1]");
  orc->add_flag("--brute", orc_brute, "Also enumerate all outcomes");
  orc->callback([&] {
    command = "oracle";
    handler = [&]() -> json {
      const SeparationInstance inst = io::separation_from_json(io::read_json(orc_instance));
      FptasStats stats;
      const OracleResult r = min_ratio_fptas(inst, orc_eps, &stats);
      json body = {{"provenance", provenance("oracle", g, {{"instance", orc_instance}, {"eps", orc_eps}})},
                   {"outcome", io::outcome_to_json(r.outcome)},
                   {"ratio", io::number(r.ratio)},
                   {"stats",
                    {{"families", stats.families},
                     {"max_families", stats.max_families},
                     {"t", stats.t},
                     {"dimensions", stats.dimensions},
                     {"family_bound", stats.family_bound}}}};
      if (orc_brute) {
        const OracleResult b = min_ratio_bruteforce(inst);
        body["brute"] = {{"outcome", io::outcome_to_json(b.outcome)}, {"ratio", io::number(b.ratio)}};
      }
      return body;
    };
  });

  // transform
  auto* tr = app.add_subcommand("transform", "Turn a delta-IC contract into an IC or IR one");
  std::string tr_instance = "-", tr_contract, tr_to = "ic";
  double tr_delta = 0.0;
  tr->add_option("--instance", tr_instance, "Instance JSON");
  tr->add_option("--contract", tr_contract, "Contract JSON")->required();
  tr->add_option("--delta", tr_delta, "delta")->required();
  tr->add_option("--to", tr_to, "ic|ir")->check(CLI::IsMember({"ic", "ir"}));
  tr->callback([&] {
    command = "transform";
    handler = [&]() -> json {
      const Setting s = load_setting(tr_instance, g);
      const Contract c = io::contract_from_json(io::read_json(tr_contract));
      std::visit([&](const auto& x) { check_contract(x, c); }, s);
      json params = {{"instance", tr_instance}, {"contract", tr_contract}, {"delta", tr_delta}, {"to", tr_to}};
      json body = {{"provenance", provenance("transform", g, params)}};
      if (tr_to == "ic") {
        const ToICResult r = delta_to_ic(s, c, tr_delta);
        body["contract"] = io::to_json(r.contract);
        body["source_action"] = r.source_action;
        body["source_payoff"] = r.source_payoff;
        body["bound"] = r.bound;
        body["realized"] = choice_json(r.realized);
        body["bound_holds"] = r.bound_holds;
        if (!r.bound_holds) throw Infeasible{body};
        return body;
      }
      const ToIRResult r = delta_to_ir(s, c, tr_delta);
      body["contract"] = io::to_json(r.contract);
      body["source_action"] = r.source_action;
      body["source_payoff"] = r.source_payoff;
      body["lifted"] = r.lifted;
      body["realized"] = choice_json(r.realized);
      return body;
    };
  });

  // blackbox
  auto* bb = app.add_subcommand("blackbox", "Learn a contract from sampled outcomes; CSV per trial");
  std::string bb_instance = "-";
  double bb_eps = 0.1, bb_gamma = 0.1;
  std::optional<double> bb_eta;
  std::size_t bb_trials = 1;
  bb->add_option("--instance", bb_instance, "Hidden instance JSON");
  bb->add_option("--eps", bb_eps, "Accuracy eps in (0,1/2]");
  bb->add_option("--gamma", bb_gamma, "Failure probability");
  bb->add_option("--eta", bb_eta, "Minimum outcome probability (default: read off the instance)");
  bb->add_option("--trials", bb_trials, "Number of seeded trials")->check(CLI::PositiveNumber);
  std::function<void()> bb_run;
  bb->callback([&] {
    command = "blackbox";
    bb_run = [&] {
      const Setting s = load_setting(bb_instance, g);
      out << "# contract-forge " << kVersion << " blackbox instance=" << bb_instance << " eps=" << num(bb_eps)
          << " gamma=" << num(bb_gamma) << " trials=" << bb_trials << " seed=" << g.seed << '\n';
      out << "trial,seed,s,ic_slack,payoff,opt,event,good\n";
      for (std::size_t t = 0; t < bb_trials; ++t) {
        const std::uint64_t seed = trial_seed(g.seed, t);
        QueryOracle oracle(s, seed);
        const BlackBoxResult r = blackbox_contract(oracle, bb_eps, bb_gamma, bb_eta);
        const bool good = r.ic_slack >= -r.claimed_delta - g.tol && r.payoff_on_true >= r.payoff_bound - g.tol;
        out << t << ',' << seed << ',' << r.samples << ',' << num(r.ic_slack) << ',' << num(r.payoff_on_true)
            << ',' << num(r.opt) << ',' << (r.event_holds ? 1 : 0) << ',' << (good ? 1 : 0) << '\n';
      }
    };
  });

  // gen
  auto* gen = app.add_subcommand("gen", "Generate instances");
  std::string gen_kind, gen_out = "-", gen_cnf;
  int gen_c = 2;
  double gen_gamma = 0.1, gen_eps = 0.1, gen_delta = 0.5, gen_lo = 0.0, gen_hi = 1.0;
  std::vector<long long> gen_a;
  std::size_t gen_n = 3, gen_m = 4;
  gen->add_option("kind", gen_kind, "gap|sat|product2|productc|minmax|a3|f|random")
      ->required()
      ->check(CLI::IsMember({"gap", "sat", "product2", "productc", "minmax", "a3", "f", "random"}));
  gen->add_option("-o,--output", gen_out, "Output path ('-' for stdout)");
  gen->add_option("--c", gen_c, "Number of gap actions");
  gen->add_option("--gamma", gen_gamma, "Gap parameter");
  gen->add_option("--epsilon", gen_eps, "Epsilon parameter");
  gen->add_option("--delta", gen_delta, "Delta parameter");
  gen->add_option("--cnf", gen_cnf, "DIMACS CNF file");
  gen->add_option("--a", gen_a, "Comma-separated integers for minmax")->delimiter(',');
  gen->add_option("--n", gen_n, "Actions (random)");
  gen->add_option("--m", gen_m, "Items (random)");
  gen->add_option("--lo", gen_lo, "Smallest item probability (random)");
  gen->add_option("--hi", gen_hi, "Largest item probability (random)");
  gen->callback([&] {
    command = "gen";
    handler = [&]() -> json {
      auto formula = [&] {
        if (gen_cnf.empty()) throw ArgumentError("gen " + gen_kind + " needs --cnf");
        std::ifstream in(gen_cnf);
        if (!in) throw ParseError("cannot open '" + gen_cnf + "'");
        return parse_dimacs(in);
      };
      json doc;
      json meta = {{"generator", gen_kind}};
      if (gen_kind == "gap") {
        doc = io::to_json(gen_gap(gen_c, gen_gamma));
        meta["c"] = gen_c;
        meta["gamma"] = gen_gamma;
      } else if (gen_kind == "sat") {
        doc = io::to_json(gen_sat(formula()));
      } else if (gen_kind == "product2") {
        doc = io::to_json(gen_product2(formula(), gen_eps));
        meta["epsilon"] = gen_eps;
      } else if (gen_kind == "productc") {
        doc = io::to_json(gen_productc(formula(), gen_c, gen_eps));
        meta["c"] = gen_c;
        meta["epsilon"] = gen_eps;
      } else if (gen_kind == "minmax") {
        const MinMaxInstance mm = gen_minmax(gen_a);
        doc = io::to_json(mm.setting);
        meta.update({{"a", gen_a}, {"ell", mm.ell}, {"A", mm.A}, {"Delta", mm.Delta}, {"reward", mm.reward},
                     {"cost", mm.cost}});
      } else if (gen_kind == "a3") {
        const A3Instance a3 = gen_appendixA3(gen_eps, gen_delta);
        doc = io::to_json(a3.setting);
        meta.update({{"epsilon", gen_eps}, {"delta", gen_delta}, {"M", a3.M}, {"opt", a3.opt},
                     {"delta_payoff", a3.delta_payoff}, {"delta_contract", io::to_json(Contract(a3.delta_contract))}});
      } else if (gen_kind == "f") {
        const FInstance f = gen_appendixF(gen_delta);
        doc = io::to_json(f.setting);
        meta.update({{"delta", gen_delta}, {"R1", f.R1}, {"R2", f.R2}, {"opt", f.opt}, {"separable", f.separable},
                     {"opt_contract", io::to_json(Contract(f.opt_contract))}});
      } else {
        const ProductSetting r = gen_random(gen_n, gen_m, g.seed, gen_lo, gen_hi);
        doc = io::to_json(r);
        meta.update({{"n", gen_n}, {"m", gen_m}, {"seed", g.seed}, {"lo", gen_lo}, {"hi", gen_hi},
                     {"digest", digest_hex(r)}});
      }
      doc["meta"] = std::move(meta);
      return doc;
    };
  });

  // verify
  auto* ver = app.add_subcommand("verify", "Check that a contract (delta-)incentivizes an action");
  std::string ver_instance = "-", ver_contract, ver_notion = "mult";
  std::size_t ver_action = 0;
  double ver_delta = 0.0;
  ver->add_option("--instance", ver_instance, "Instance JSON");
  ver->add_option("--contract", ver_contract, "Contract JSON")->required();
  ver->add_option("--action", ver_action, "Target action")->required();
  ver->add_option("--delta", ver_delta, "delta");
  ver->add_option("--notion", ver_notion, "mult|add");
  ver->callback([&] {
    command = "verify";
    handler = [&]() -> json {
      const Setting s = load_setting(ver_instance, g);
      const Contract c = io::contract_from_json(io::read_json(ver_contract));
      std::visit([&](const auto& x) { check_contract(x, c); }, s);
      if (ver_action >= num_actions(s)) throw ArgumentError("action out of range");
      const ICNotion notion = parse_notion(ver_notion);
      const double slack = ic_slack(s, c, ver_action, ver_delta, notion);
      const bool ok = verify_delta_ic(s, c, ver_action, ver_delta, notion, g.tol);
      const ActionValues v = evaluate(s, c);
      json params = {{"instance", ver_instance}, {"contract", ver_contract}, {"action", ver_action},
                     {"delta", ver_delta}, {"notion", ver_notion}};
      json body = {{"provenance", provenance("verify", g, params)},
                   {"action", ver_action},
                   {"slack", slack},
                   {"ok", ok},
                   {"expected_payment", v.payments[ver_action]},
                   {"principal_payoff", v.payoffs[ver_action]},
                   {"agent_utility", v.utilities[ver_action]}};
      if (!ok) throw Infeasible{body};
      return body;
    };
  });

  // bench
  auto* bench = app.add_subcommand("bench", "Solve a batch of instances");
  std::vector<std::string> bench_files;
  double bench_delta = 0.1;
  std::size_t bench_jobs = 1;
  bench->add_option("instances", bench_files, "Instance JSON files")->required();
  bench->add_option("--delta", bench_delta, "delta for the multiplicative delta-IC solver");
  bench->add_option("--jobs", bench_jobs, "Parallel workers")->check(CLI::PositiveNumber);
  bench->callback([&] {
    command = "bench";
    handler = [&]() -> json {
      auto one = [&](std::size_t id) -> json {
        json row = {{"id", id}, {"instance", bench_files[id]}};
        try {
          const Setting s = load_setting(bench_files[id], g);
          row["actions"] = num_actions(s);
          row["first_best"] = first_best(s);
          row["opt"] = opt_contract(s).payoff;
          row["linear"] = optimal_linear(s).payoff;
          if (const auto* p = std::get_if<ProductSetting>(&s)) {
            row["items"] = p->num_items();
            if (p->num_actions() <= kMaxDeltaActions) {
              row["delta_opt"] = opt_contract_delta(*p, bench_delta).payoff;
            }
          }
        } catch (const std::exception& e) {
          row["error"] = e.what();
        }
        return row;
      };
      std::vector<json> rows(bench_files.size());
      std::size_t next = 0;
      while (next < bench_files.size()) {
        std::vector<std::future<json>> batch;
        const std::size_t start = next;
        for (; next < bench_files.size() && next - start < bench_jobs; ++next) {
          batch.push_back(std::async(std::launch::async, one, next));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) rows[start + k] = batch[k].get();
      }
      return {{"provenance", provenance("bench", g, {{"delta", bench_delta}, {"jobs", bench_jobs}})},
              {"results", rows}};
    };
  });

  std::mutex warn_mutex;
  set_warning_sink([&](std::string_view msg) {
    std::lock_guard lock(warn_mutex);
    err << "warning: " << msg << '\n';
  });
  struct Restore {
    ~Restore() {
      set_warning_sink([](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; });
    }
  } restore;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (bb_run) {
      bb_run();
      return kOk;
    }
    const json body = handler();
    std::string path = command == "gen" ? gen_out : "-";
    write_output(body, path, out);
    return kOk;
  } catch (const Infeasible& inf) {
    out << inf.body.dump(2) << '\n';
    return kInfeasible;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const InstanceError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return kResource;
  } catch (const ResourceError& e) {
    err << "resource: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace cforge::cli
