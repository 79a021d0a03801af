// Command-line front end for the otstruct library.
//
// Exit status:
//   0  success
//   1  internal error
//   2  unreadable or invalid input
//   3  plan support has a cycle (decompose without --auto-trim)
//   4  a verified inequality failed
//   5  a published example did not reproduce
//   6  an exhaustive oracle's size guard was exceeded

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "otstruct/bottleneck.hpp"
#include "otstruct/bounds.hpp"
#include "otstruct/errors.hpp"
#include "otstruct/instance_io.hpp"
#include "otstruct/paper_examples.hpp"
#include "otstruct/random_instances.hpp"
#include "otstruct/serialize.hpp"
#include "otstruct/solver.hpp"
#include "otstruct/structure.hpp"

#ifndef OTSTRUCT_INSTANCE_DIR
#define OTSTRUCT_INSTANCE_DIR "instances"
#endif

namespace {

using nlohmann::json;
using namespace otstruct;

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kInvalidInput = 2,
  kCyclic = 3,
  kViolated = 4,
  kMismatch = 5,
  kGuard = 6,
};

struct Globals {
  std::string output;
  std::string format = "text";
  std::size_t guard_oracle = kDefaultOracleGuard;

  bool structured() const { return format == "structured"; }
};

struct Emitter {
  explicit Emitter(const Globals& g) : globals(g) {}

  const Globals& globals;
  std::ostringstream text;
  json doc = json::object();

  void note_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
      std::cerr << "warning: " << w << '\n';
      doc["warnings"].push_back(w);
    }
  }

  void finish() {
    const std::string body = globals.structured() ? doc.dump(2) + "\n" : text.str();
    if (globals.output.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(globals.output);
      if (!out) throw Error("cannot write " + globals.output);
      out << body;
    }
  }
};

json manifest(const std::string& command, const std::vector<std::string>& inputs, const Globals& g) {
  return {{"command", command},
          {"inputs", inputs},
          {"guards", {{"oracle", g.guard_oracle}, {"hall", kDefaultHallGuard}, {"subset", kDefaultSubsetGuard}}},
          {"output", g.output.empty() ? json(nullptr) : json(g.output)}};
}

std::string exact_and_decimal(const RootSum& v) {
  if (v.is_rational()) return v.str();
  return v.str() + "  (~" + v.to_decimal(20) + ")";
}

std::string exact_and_decimal(const CostValue& c) {
  if (c.representable()) return exact_and_decimal(c.to_root_sum());
  return c.str();
}

void unequal_sizes_note(const Instance& instance, Emitter& out) {
  if (instance.rows() == instance.cols()) return;
  const std::string note = "unequal support sizes (" + std::to_string(instance.rows()) + " x " +
                           std::to_string(instance.cols()) + "): vertex plans have at most m + n - 1 = " +
                           std::to_string(instance.rows() + instance.cols() - 1) + " entries";
  out.text << "note: " << note << '\n';
  out.doc["notes"].push_back(note);
}

Instance with_exponent(const Instance& instance, const std::optional<std::string>& p) {
  if (!p) return instance;
  CostSpec spec = instance.cost_spec();
  spec.p = Rational::parse(*p);
  return instance.with_cost(std::move(spec));
}

std::vector<Rational> parse_p_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(Rational::parse(item));
  }
  if (out.empty()) throw ParseError("empty --p list");
  return out;
}

// ---------------------------------------------------------------------------

int cmd_solve(const Globals& g, const std::string& path, const std::optional<std::string>& p, bool trim) {
  Emitter out(g);
  std::vector<std::string> warnings;
  const Instance instance = with_exponent(load_instance(path, &warnings), p);
  out.note_warnings(warnings);
  out.doc["manifest"] = manifest("solve", {path}, g);

  const SolveResult solved = solve_optimal(instance);
  TransportPlan plan = solved.plan;
  out.text << "objective: " << exact_and_decimal(solved.objective) << '\n';
  out.doc["objective"] = to_json(solved.objective);
  out.doc["pivots"] = solved.pivots;
  out.doc["potentials"] = to_json(solved.potentials);
  unequal_sizes_note(instance, out);

  if (trim) {
    plan = minimize_support(solved.plan, solved.potentials, instance);
    const TrimVerdict verdict = is_trim_certified(plan, instance, g.guard_oracle);
    out.text << "trim: "
             << (verdict.status == TrimStatus::Unverifiable ? "forest-supported optimal, trimness unverified"
                                                              : to_string(verdict.status))
             << '\n';
    out.doc["trim"] = to_json(verdict);
  }
  out.text << plan_text(plan);
  out.text << "potentials u:";
  for (const auto& u : solved.potentials.u) out.text << ' ' << u;
  out.text << "\npotentials v:";
  for (const auto& v : solved.potentials.v) out.text << ' ' << v;
  out.text << '\n';
  out.doc["plan"] = plan_document(plan, instance, path);
  out.finish();
  return kOk;
}

int cmd_decompose(const Globals& g, const std::string& input, std::optional<std::string> instance_path, bool auto_trim) {
  Emitter out(g);
  const json doc = load_json_file(input);
  std::optional<Instance> instance;
  TransportPlan plan;
  std::vector<std::string> warnings;

  if (looks_like_plan(doc)) {
    PlanFile file = plan_from_json(doc);
    if (!instance_path && file.instance_path) {
      const std::filesystem::path rel(*file.instance_path);
      instance_path = rel.is_absolute() ? rel.string() : (std::filesystem::path(input).parent_path() / rel).string();
    }
    if (instance_path) {
      instance = load_instance(*instance_path, &warnings);
      if (!file.instance_hash.empty() && file.instance_hash != instance_hash(*instance)) {
        throw ValidationError("plan " + input + " was not written for instance " + *instance_path);
      }
      if (file.plan.rows() != instance->rows() || file.plan.cols() != instance->cols()) {
        throw ValidationError("plan dimensions differ from the instance");
      }
    }
    plan = std::move(file.plan);
    if (auto_trim && !SupportGraph(plan).is_forest()) {
      if (!instance) throw ValidationError("--auto-trim on a plan needs its instance (--instance)");
      const SolveResult solved = solve_optimal(*instance);
      plan = minimize_support(plan, solved.potentials, *instance);
      out.text << "auto-trim: support reduced to " << plan.support_size() << " entries\n";
      out.doc["auto_trim"] = true;
    }
  } else {
    instance = instance_from_json(doc, &warnings);
    const SolveResult solved = solve_optimal(*instance);
    plan = minimize_support(solved.plan, solved.potentials, *instance);
  }
  out.note_warnings(warnings);
  std::vector<std::string> inputs{input};
  if (instance_path) inputs.push_back(*instance_path);
  out.doc["manifest"] = manifest("decompose", inputs, g);

  const Decomposition dec = decompose(plan);
  if (reconstruct(dec.model) != plan) throw Error("reconstruction does not reproduce the plan");

  out.text << plan_text(plan) << model_text(dec.model) << trace_text(dec.trace);
  out.doc["plan"] = to_json(plan);
  out.doc["model"] = to_json(dec.model);
  out.doc["trace"] = to_json(dec.trace);
  out.doc["reconstruction_verified"] = true;
  const Rational alpha = alpha_of_model(dec.model);
  out.text << "alpha: " << alpha << '\n';
  out.doc["alpha"] = alpha.str();
  if (instance) {
    unequal_sizes_note(*instance, out);
    const auto [first, second] = cost_split(dec.model, *instance);
    out.text << "cost split: " << exact_and_decimal(first) << " | " << exact_and_decimal(second) << '\n';
    out.text << "T_inf(model): " << exact_and_decimal(t_infinity_of_model(dec.model, *instance)) << '\n';
    out.doc["cost_split"] = json::array({to_json(first), to_json(second)});
    out.doc["t_infinity"] = to_json(t_infinity_of_model(dec.model, *instance));
  }
  out.finish();
  return kOk;
}

int cmd_winf(const Globals& g, const std::string& path) {
  Emitter out(g);
  std::vector<std::string> warnings;
  const Instance instance = load_instance(path, &warnings);
  out.note_warnings(warnings);
  out.doc["manifest"] = manifest("winf", {path}, g);
  const ThresholdCertificate cert = w_infinity(instance);
  if (!certificate_valid(cert, instance)) throw Error("bottleneck certificate failed verification");
  out.text << "threshold: " << exact_and_decimal(cert.threshold) << '\n';
  out.text << "threshold index: " << cert.threshold_index << " of " << cert.distinct_costs << " distinct costs\n";
  out.text << "witness " << plan_text(cert.witness);
  if (cert.below) {
    out.text << "below: rows {";
    for (std::size_t k = 0; k < cert.below->rows.size(); ++k) out.text << (k ? ", " : "") << cert.below->rows[k];
    out.text << "} exceed their neighbours at " << cert.below->threshold.str() << " by " << cert.below->deficit << '\n';
  }
  out.doc["certificate"] = to_json(cert);
  out.finish();
  return kOk;
}

struct VerifyOutcome {
  json reports = json::array();
  std::string text;
  bool ok = true;
  std::size_t count = 0;
};

VerifyOutcome verify_one(const Instance& instance, const std::vector<Rational>& ps, const std::string& name,
                         std::size_t oracle_guard) {
  VerifyOutcome o;
  std::ostringstream text;
  const Corollary1Report c1 = verify_corollary1(instance, oracle_guard);
  json c1j = to_json(c1);
  c1j["instance"] = name;
  c1j["kind"] = "corollary1";
  o.reports.push_back(std::move(c1j));
  o.ok = o.ok && c1.holds;
  text << name << " corollary1: W=" << c1.w_c.str() << " alpha=" << c1.alpha.alpha_model
       << " Winf=" << c1.w_inf.threshold.str() << (c1.holds ? " holds" : " VIOLATED") << (c1.tight ? " tight" : "")
       << '\n';
  for (const auto& p : ps) {
    const BoundReport r = verify_theorem4(instance, p);
    json rj = to_json(r);
    rj["instance"] = name;
    rj["kind"] = "theorem4";
    o.reports.push_back(std::move(rj));
    ++o.count;
    const bool uniform_ok = !r.uniform_holds || *r.uniform_holds;
    o.ok = o.ok && r.holds && uniform_ok;
    text << name << " p=" << p << ": alpha_p=" << r.alpha_p << " lhs=" << r.lhs.str() << " rhs=" << r.rhs.str()
         << (r.holds ? " holds" : " VIOLATED") << (r.tight ? " tight=true" : " tight=false");
    if (r.uniform_holds) text << (*r.uniform_holds ? " uniform holds" : " uniform VIOLATED");
    text << '\n';
  }
  o.text = text.str();
  return o;
}

int cmd_verify(const Globals& g, const std::vector<std::string>& paths, const std::vector<std::string>& random,
               const std::string& p_list, std::size_t jobs) {
  Emitter out(g);
  const std::vector<Rational> ps = parse_p_list(p_list);
  std::vector<Instance> instances;
  std::vector<std::string> names;
  json man = manifest("verify", paths, g);
  man["p"] = p_list;

  for (const auto& path : paths) {
    std::vector<std::string> warnings;
    instances.push_back(load_instance(path, &warnings));
    out.note_warnings(warnings);
    names.push_back(path);
  }
  if (!random.empty()) {
    if (random.size() != 3) throw ParseError("--random takes n count seed");
    const std::size_t n_max = std::stoul(random[0]);
    const std::size_t count = std::stoul(random[1]);
    std::uint64_t seed = std::stoull(random[2]);
    if (const char* env = std::getenv("OTSTRUCT_SEED"); env && *env) seed = std::stoull(env);
    if (n_max == 0) throw ValidationError("--random needs n >= 1");
    man["random"] = {{"n", n_max}, {"count", count}, {"seed", seed}};
    InstanceGenerator gen(seed);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t m = gen.uniform(1, n_max);
      const std::size_t n = gen.uniform(1, n_max);
      InstanceGenerator::Options opts;
      opts.dimension = gen.uniform(1, 3);
      InstanceGenerator sub(gen.uniform(0, UINT64_MAX), opts);
      instances.push_back(sub.euclidean(m, n, Rational(1)));
      names.push_back("random#" + std::to_string(k));
    }
  }
  if (instances.empty()) throw ParseError("verify needs instance paths or --random");
  out.doc["manifest"] = std::move(man);

  std::vector<VerifyOutcome> outcomes(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, instances.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < instances.size(); k += workers) {
        try {
          outcomes[k] = verify_one(instances[k], ps, names[k], g.guard_oracle);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  bool ok = true;
  std::size_t reports = 0;
  json all = json::array();
  for (auto& o : outcomes) {
    ok = ok && o.ok;
    reports += o.count;
    out.text << o.text;
    for (auto& r : o.reports) all.push_back(std::move(r));
  }
  out.text << reports << " bound reports over " << instances.size() << " instances: "
           << (ok ? "all inequalities hold" : "VIOLATIONS FOUND") << '\n';
  out.doc["reports"] = std::move(all);
  out.doc["bound_reports"] = reports;
  out.doc["all_hold"] = ok;
  out.finish();
  return ok ? kOk : kViolated;
}

int cmd_paper_examples(const Globals& g, const std::string& dir, const std::optional<std::string>& perturb) {
  Emitter out(g);
  out.doc["manifest"] = manifest("paper-examples", {dir}, g);
  const std::vector<ExampleCheck> checks = run_paper_examples({dir, perturb});
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::size_t failures = 0;
  json rows = json::array();
  for (const auto& c : checks) {
    out.text << (c.pass ? "ok    " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ') << c.actual;
    if (!c.pass) out.text << "   (expected " << c.expected << ")";
    out.text << '\n';
    failures += c.pass ? 0 : 1;
    rows.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
  }
  out.text << checks.size() - failures << "/" << checks.size() << " examples reproduced\n";
  out.doc["checks"] = std::move(rows);
  out.doc["mismatches"] = failures;
  out.finish();
  if (failures) {
    for (const auto& c : checks) {
      if (!c.pass) std::cerr << "mismatch: " << c.name << ": expected " << c.expected << ", got " << c.actual << '\n';
    }
    return kMismatch;
  }
  return kOk;
}

int cmd_oracle(const Globals& g, const std::string& path) {
  Emitter out(g);
  std::vector<std::string> warnings;
  const Instance instance = load_instance(path, &warnings);
  out.note_warnings(warnings);
  out.doc["manifest"] = manifest("oracle", {path}, g);

  const BruteForceResult bf = brute_force_optimal(instance, g.guard_oracle);
  out.text << "optimum: " << exact_and_decimal(bf.optimum) << '\n';
  out.text << "vertices: " << bf.vertices << '\n';
  out.text << "minimal support: " << bf.minimal_support << " (" << bf.minimal_plans.size() << " plans)\n";
  for (const auto& p : bf.minimal_plans) out.text << plan_text(p);
  out.doc["optimal"] = to_json(bf);

  const CostValue winf = w_infinity_bruteforce(instance);
  out.text << "W_inf (Hall enumeration): " << exact_and_decimal(winf) << '\n';
  out.doc["w_infinity"] = to_json(winf);

  const UniformAlpha ua = alpha_uniform(instance.mu(), instance.nu());
  out.text << "alpha_uniform: " << ua.value << "  A = {";
  for (std::size_t k = 0; k < ua.rows.size(); ++k) out.text << (k ? ", " : "") << ua.rows[k];
  out.text << "}, B = {";
  for (std::size_t k = 0; k < ua.cols.size(); ++k) out.text << (k ? ", " : "") << ua.cols[k];
  out.text << "}\n";
  out.doc["alpha_uniform"] = {{"value", ua.value.str()}, {"A", ua.rows}, {"B", ua.cols}};
  out.finish();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact discrete optimal transport: trim plans, diffusive models and bottleneck bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--output,-o", g.output, "Write the report to this file instead of stdout");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--guard-oracle", g.guard_oracle, "Largest m*n handed to the exhaustive plan oracle");

  std::string path;
  std::optional<std::string> p;
  bool trim = false;
  auto* solve = app.add_subcommand("solve", "Solve an instance exactly");
  solve->add_option("instance", path, "Instance file")->required();
  solve->add_option("--p", p, "Cost exponent override");
  solve->add_flag("--trim", trim, "Reduce support and certify trimness");

  std::optional<std::string> instance_opt;
  bool auto_trim = false;
  auto* decomp = app.add_subcommand("decompose", "Decompose a forest-supported plan into a diffusive model");
  decomp->add_option("input", path, "Plan file or instance file")->required();
  decomp->add_option("--instance", instance_opt, "Instance the plan belongs to");
  decomp->add_flag("--auto-trim", auto_trim, "Reduce a cyclic plan's support before decomposing");

  auto* winf = app.add_subcommand("winf", "Bottleneck distance with certificate");
  winf->add_option("instance", path, "Instance file")->required();

  std::vector<std::string> paths;
  std::vector<std::string> random;
  std::string p_list = "1,2,3";
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* verify = app.add_subcommand("verify", "Check the W_inf bounds on instances");
  verify->add_option("instances", paths, "Instance files");
  verify->add_option("--random", random, "Random suite: max atoms per side, count, seed")->expected(3);
  verify->add_option("--p", p_list, "Comma-separated exponents");
  verify->add_option("--jobs,-j", jobs, "Worker threads");

  std::string dir = OTSTRUCT_INSTANCE_DIR;
  std::optional<std::string> perturb;
  auto* examples = app.add_subcommand("paper-examples", "Reproduce every published example");
  examples->add_option("--dir", dir, "Directory with the example instances");
  examples->add_option("--perturb", perturb, "Corrupt the expected value of one named check");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive oracles for tiny instances");
  oracle->add_option("instance", path, "Instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*solve) return cmd_solve(g, path, p, trim);
    if (*decomp) return cmd_decompose(g, path, instance_opt, auto_trim);
    if (*winf) return cmd_winf(g, path);
    if (*verify) return cmd_verify(g, paths, random, p_list, jobs);
    if (*examples) return cmd_paper_examples(g, dir, perturb);
    if (*oracle) return cmd_oracle(g, path);
  } catch (const CyclicSupport& e) {
    std::cerr << "error: " << e.what() << " (rerun with --auto-trim)\n";
    return kCyclic;
  } catch (const InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGuard;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InvalidP& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const UnsupportedCost& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const NotOptimal& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
