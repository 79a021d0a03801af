#include "otstruct/serialize.hpp"

#include <fstream>
#include <sstream>

#include "otstruct/errors.hpp"
#include "otstruct/instance_io.hpp"

namespace otstruct {

using nlohmann::json;

json to_json(const Rational& r) { return r.str(); }

json to_json(const RootSum& v) { return {{"exact", v.str()}, {"decimal", v.to_decimal(20)}}; }

json to_json(const CostValue& c) {
  json out{{"exact", c.str()}};
  if (c.representable()) {
    out["decimal"] = c.to_root_sum().to_decimal(20);
  } else {
    std::ostringstream s;
    s.precision(17);
    s << c.to_double();
    out["decimal"] = s.str();
  }
  return out;
}

json to_json(const TransportPlan& plan) {
  json entries = json::array();
  for (const auto& e : plan.entries()) entries.push_back(json::array({e.i, e.j, e.mass.str()}));
  return {{"m", plan.rows()}, {"n", plan.cols()}, {"support", plan.support_size()}, {"entries", std::move(entries)}};
}

json to_json(const DualPotentials& potentials) {
  json u = json::array(), v = json::array();
  for (const auto& x : potentials.u) u.push_back(x.str());
  for (const auto& x : potentials.v) v.push_back(x.str());
  return {{"u", std::move(u)}, {"v", std::move(v)}};
}

namespace {

json weights(const std::vector<Rational>& w) {
  json out = json::array();
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!w[k].is_zero()) out.push_back(json::array({k, w[k].str()}));
  }
  return out;
}

json index_map(const std::vector<std::optional<std::size_t>>& h) {
  json out = json::array();
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k]) out.push_back(json::array({k, *h[k]}));
  }
  return out;
}

json dense(const std::vector<Rational>& w) {
  json out = json::array();
  for (const auto& x : w) out.push_back(x.str());
  return out;
}

json leaf(const std::optional<LeafArc>& arc) {
  if (!arc) return nullptr;
  return {{"row", arc->row}, {"col", arc->col}, {"mass", arc->mass.str()}};
}

}  // namespace

json to_json(const DiffusiveModel& model) {
  return {{"m", model.rows()},
          {"n", model.cols()},
          {"mu_d", weights(model.mu_d)},
          {"mu_c", weights(model.mu_c)},
          {"nu_d", weights(model.nu_d)},
          {"nu_c", weights(model.nu_c)},
          {"h1", index_map(model.h1)},
          {"h2", index_map(model.h2)}};
}

json to_json(const PeelTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"branch", to_string(s.branch)},
                     {"row_leaf", leaf(s.row_leaf)},
                     {"column_leaf", leaf(s.column_leaf)},
                     {"residual_mu", dense(s.residual_mu)},
                     {"residual_nu", dense(s.residual_nu)}});
  }
  return {{"initial_mu", dense(trace.initial_mu)}, {"initial_nu", dense(trace.initial_nu)}, {"steps", std::move(steps)}};
}

json to_json(const HallCut& cut) {
  return {{"threshold", to_json(cut.threshold)}, {"rows", cut.rows}, {"deficit", cut.deficit.str()}};
}

json to_json(const ThresholdCertificate& cert) {
  return {{"threshold", to_json(cert.threshold)},
          {"threshold_index", cert.threshold_index},
          {"distinct_costs", cert.distinct_costs},
          {"witness", to_json(cert.witness)},
          {"below", cert.below ? to_json(*cert.below) : json(nullptr)}};
}

json to_json(const TrimVerdict& verdict) {
  json out{{"status", to_string(verdict.status)}, {"optimal", verdict.optimal}};
  out["minimal_support"] = verdict.minimal_support ? json(*verdict.minimal_support) : json(nullptr);
  out["witness"] = verdict.witness ? to_json(*verdict.witness) : json(nullptr);
  return out;
}

json to_json(const BruteForceResult& result) {
  json plans = json::array();
  for (const auto& p : result.minimal_plans) plans.push_back(to_json(p));
  return {{"optimum", to_json(result.optimum)},
          {"minimal_support", result.minimal_support},
          {"vertices", result.vertices},
          {"minimal_plans", std::move(plans)}};
}

json to_json(const PowerIdentityReport& report) {
  return {{"p", report.p.str()},
          {"index_base", report.index_base},
          {"index_powered", report.index_powered},
          {"threshold_base", to_json(report.threshold_base)},
          {"threshold_powered", to_json(report.threshold_powered)},
          {"value_identity", report.value_identity},
          {"holds", report.holds()}};
}

json to_json(const Corollary1Report& report) {
  json alpha{{"alpha_model", report.alpha.alpha_model.str()}};
  alpha["alpha_uniform"] = report.alpha.alpha_uniform ? json(report.alpha.alpha_uniform->str()) : json(nullptr);
  if (report.alpha.achieving_pair) {
    alpha["achieving_pair"] = {{"A", report.alpha.achieving_pair->first}, {"B", report.alpha.achieving_pair->second}};
  }
  return {{"w_c", to_json(report.w_c)},
          {"w_inf", to_json(report.w_inf.threshold)},
          {"alpha", std::move(alpha)},
          {"rhs", to_json(report.rhs)},
          {"holds", report.holds},
          {"tight", report.tight},
          {"support", report.pipeline.reduced.support_size()},
          {"trim", to_string(report.pipeline.trim.status)}};
}

json to_json(const BoundReport& report) {
  json out{{"p", report.p.str()},
           {"w_cp", to_json(report.w_cp)},
           {"w_inf", to_json(report.w_inf)},
           {"alpha_p", report.alpha_p.str()},
           {"lhs", to_json(report.lhs)},
           {"rhs", to_json(report.rhs)},
           {"slack", to_json(report.slack)},
           {"holds", report.holds},
           {"tight", report.tight},
           {"root_form", {{"w_inf", report.root_lhs}, {"bound", report.root_rhs}}}};
  out["alpha_uniform"] = report.alpha_uniform ? json(report.alpha_uniform->str()) : json(nullptr);
  out["uniform_lhs"] = report.uniform_lhs ? to_json(*report.uniform_lhs) : json(nullptr);
  out["uniform_holds"] = report.uniform_holds ? json(*report.uniform_holds) : json(nullptr);
  return out;
}

json to_json(const CounterexampleReport& report) {
  return {{"epsilon", report.epsilon.str()},
          {"w_inf", to_json(report.w_inf)},
          {"w2_squared", report.w2_squared.str()},
          {"ratio", report.ratio.str()}};
}

json plan_document(const TransportPlan& plan, const Instance& instance, const std::optional<std::string>& instance_path) {
  json doc = to_json(plan);
  doc["instance_hash"] = instance_hash(instance);
  if (instance_path) doc["instance"] = *instance_path;
  return doc;
}

bool looks_like_plan(const json& doc) { return doc.is_object() && doc.contains("entries") && !doc.contains("mu"); }

PlanFile plan_from_json(const json& doc) {
  try {
    if (!looks_like_plan(doc)) throw ParseError("not a plan document");
    PlanFile out;
    const std::size_t m = doc.at("m").get<std::size_t>();
    const std::size_t n = doc.at("n").get<std::size_t>();
    std::vector<PlanEntry> entries;
    for (const auto& e : doc.at("entries")) {
      if (!e.is_array() || e.size() != 3) throw ParseError("plan entries must be [i, j, mass] triples");
      entries.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), rational_from_json(e[2], "plan entry")});
    }
    try {
      out.plan = TransportPlan(m, n, std::move(entries));
    } catch (const Error& e) {
      throw ValidationError(std::string("plan: ") + e.what());
    }
    if (doc.contains("instance_hash")) out.instance_hash = doc["instance_hash"].get<std::string>();
    if (doc.contains("instance")) out.instance_path = doc["instance"].get<std::string>();
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

PlanFile load_plan(const std::string& path) { return plan_from_json(load_json_file(path)); }

std::string plan_text(const TransportPlan& plan) {
  std::ostringstream out;
  out << "plan " << plan.rows() << "x" << plan.cols() << ", " << plan.support_size() << " entries\n";
  for (const auto& e : plan.entries()) out << "  (" << e.i << ", " << e.j << ")  " << e.mass << '\n';
  return out.str();
}

std::string model_text(const DiffusiveModel& model) {
  std::ostringstream out;
  auto part = [&](const char* name, const std::vector<Rational>& w) {
    out << "  " << name << ":";
    bool any = false;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k].is_zero()) continue;
      out << ' ' << w[k] << "@" << k;
      any = true;
    }
    out << (any ? "\n" : " 0\n");
  };
  out << "diffusive model\n";
  part("mu_d", model.mu_d);
  part("mu_c", model.mu_c);
  part("nu_d", model.nu_d);
  part("nu_c", model.nu_c);
  out << "  h1:";
  for (std::size_t i = 0; i < model.h1.size(); ++i) {
    if (model.h1[i]) out << ' ' << i << "->" << *model.h1[i];
  }
  out << "\n  h2:";
  for (std::size_t j = 0; j < model.h2.size(); ++j) {
    if (model.h2[j]) out << ' ' << j << "->" << *model.h2[j];
  }
  out << '\n';
  return out.str();
}

std::string trace_text(const PeelTrace& trace) {
  std::ostringstream out;
  out << "peel trace, " << trace.steps.size() << " steps\n";
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    out << "  " << k + 1 << ". " << to_string(s.branch);
    if (s.row_leaf) out << "  row leaf (" << s.row_leaf->row << ", " << s.row_leaf->col << ") " << s.row_leaf->mass;
    if (s.column_leaf) {
      out << "  column leaf (" << s.column_leaf->row << ", " << s.column_leaf->col << ") " << s.column_leaf->mass;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace otstruct
