#include "otstruct/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "otstruct/errors.hpp"

namespace otstruct {

using nlohmann::json;

Rational rational_from_json(const json& value, const std::string& where) {
  try {
    if (value.is_string()) return Rational::parse(value.get<std::string>());
    if (value.is_number_integer()) {
      if (value.is_number_unsigned()) return Rational(mpq_class(std::to_string(value.get<std::uint64_t>())));
      return Rational(mpq_class(std::to_string(value.get<std::int64_t>())));
    }
    if (value.is_number_float()) {
      // JSON floats are taken at their shortest round-trip decimal spelling.
      return Rational::parse(value.dump());
    }
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a rational string or number");
}

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

struct RawMeasure {
  std::vector<Point> points;
  std::vector<Rational> masses;
};

RawMeasure read_measure(const json& doc, const std::string& name) {
  RawMeasure raw;
  const json& masses = require(doc, "masses", name);
  if (!masses.is_array()) throw ParseError(name + ".masses: expected an array");
  for (std::size_t k = 0; k < masses.size(); ++k) {
    raw.masses.push_back(rational_from_json(masses[k], name + ".masses[" + std::to_string(k) + "]"));
  }
  if (auto it = doc.find("points"); it != doc.end()) {
    if (!it->is_array()) throw ParseError(name + ".points: expected an array");
    if (it->size() != raw.masses.size()) {
      throw ValidationError(name + ": " + std::to_string(it->size()) + " points but " +
                            std::to_string(raw.masses.size()) + " masses");
    }
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& coords = (*it)[k];
      const std::string where = name + ".points[" + std::to_string(k) + "]";
      Point pt;
      if (coords.is_array()) {
        for (std::size_t c = 0; c < coords.size(); ++c) {
          pt.coords.push_back(rational_from_json(coords[c], where + "[" + std::to_string(c) + "]"));
        }
      } else {
        pt.coords.push_back(rational_from_json(coords, where));
      }
      raw.points.push_back(std::move(pt));
    }
  }
  if (auto it = doc.find("labels"); it != doc.end()) {
    if (!it->is_array() || it->size() != raw.masses.size()) {
      throw ParseError(name + ".labels: expected one label per atom");
    }
    if (raw.points.empty()) throw ParseError(name + ".labels: labels need points");
    for (std::size_t k = 0; k < it->size(); ++k) {
      if (!(*it)[k].is_null()) raw.points[k].label = (*it)[k].get<std::string>();
    }
  }
  for (std::size_t k = 0; k < raw.masses.size(); ++k) {
    if (raw.masses[k].sign() < 0) {
      throw ValidationError(name + ".masses[" + std::to_string(k) + "] is negative: " + raw.masses[k].str());
    }
  }
  return raw;
}

std::vector<std::size_t> strip_zero_atoms(RawMeasure& raw, const std::string& name,
                                          std::vector<std::string>* warnings) {
  std::vector<std::size_t> kept;
  RawMeasure out;
  for (std::size_t k = 0; k < raw.masses.size(); ++k) {
    if (raw.masses[k].is_zero()) {
      if (warnings) warnings->push_back(name + ": dropped atom " + std::to_string(k) + " with zero mass");
      continue;
    }
    kept.push_back(k);
    out.masses.push_back(raw.masses[k]);
    if (!raw.points.empty()) out.points.push_back(raw.points[k]);
  }
  raw = std::move(out);
  return kept;
}

json rational_json(const Rational& r) { return r.str(); }

}  // namespace

Instance instance_from_json(const json& doc, std::vector<std::string>* warnings) {
  RawMeasure mu = read_measure(require(doc, "mu", "instance"), "mu");
  RawMeasure nu = read_measure(require(doc, "nu", "instance"), "nu");
  const json& cost = require(doc, "cost", "instance");
  const std::string type = require(cost, "type", "cost").get<std::string>();

  const std::size_t m_raw = mu.masses.size();
  const std::size_t n_raw = nu.masses.size();
  const auto rows = strip_zero_atoms(mu, "mu", warnings);
  const auto cols = strip_zero_atoms(nu, "nu", warnings);

  CostSpec spec;
  if (type == "euclidean") {
    const Rational p = cost.contains("p") ? rational_from_json(cost["p"], "cost.p") : Rational(1);
    spec = CostSpec::euclidean(p);
  } else if (type == "matrix") {
    const json& values = require(cost, "values", "cost");
    if (!values.is_array() || values.size() != m_raw) {
      throw ValidationError("cost.values: expected " + std::to_string(m_raw) + " rows");
    }
    std::vector<std::vector<Rational>> matrix;
    for (std::size_t i : rows) {
      if (!values[i].is_array() || values[i].size() != n_raw) {
        throw ValidationError("cost.values[" + std::to_string(i) + "]: expected " + std::to_string(n_raw) +
                              " entries");
      }
      std::vector<Rational> row;
      for (std::size_t j : cols) {
        row.push_back(rational_from_json(values[i][j],
                                         "cost.values[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
      }
      matrix.push_back(std::move(row));
    }
    spec = CostSpec::matrix(std::move(matrix));
    if (cost.contains("p")) spec = spec.powered(rational_from_json(cost["p"], "cost.p"));
  } else {
    throw ParseError("cost.type: unknown cost type '" + type + "'");
  }

  auto build = [](RawMeasure& raw) {
    return raw.points.empty() ? DiscreteMeasure(std::move(raw.masses))
                              : DiscreteMeasure(std::move(raw.points), std::move(raw.masses));
  };
  return Instance(build(mu), build(nu), std::move(spec));
}

Instance load_instance(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return instance_from_json(doc, warnings);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json instance_to_json(const Instance& instance) {
  auto measure = [](const DiscreteMeasure& d) {
    json out;
    json masses = json::array();
    for (const auto& m : d.masses()) masses.push_back(rational_json(m));
    if (d.has_points()) {
      json points = json::array();
      bool any_label = false;
      for (const auto& p : d.points()) {
        json coords = json::array();
        for (const auto& c : p.coords) coords.push_back(rational_json(c));
        points.push_back(std::move(coords));
        any_label = any_label || p.label.has_value();
      }
      out["points"] = std::move(points);
      if (any_label) {
        json labels = json::array();
        for (const auto& p : d.points()) labels.push_back(p.label ? json(*p.label) : json(nullptr));
        out["labels"] = std::move(labels);
      }
    }
    out["masses"] = std::move(masses);
    return out;
  };
  json doc;
  doc["mu"] = measure(instance.mu());
  doc["nu"] = measure(instance.nu());
  const CostSpec& spec = instance.cost_spec();
  if (spec.is_euclidean()) {
    doc["cost"] = {{"type", "euclidean"}, {"p", rational_json(spec.p)}};
  } else {
    json values = json::array();
    for (const auto& row : spec.values) {
      json r = json::array();
      for (const auto& v : row) r.push_back(rational_json(v));
      values.push_back(std::move(r));
    }
    doc["cost"] = {{"type", "matrix"}, {"values", std::move(values)}};
    if (spec.p != Rational(1)) doc["cost"]["p"] = rational_json(spec.p);
  }
  return doc;
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << instance_to_json(instance).dump(2) << '\n';
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string instance_hash(const Instance& instance) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(instance_to_json(instance).dump())));
  return buf;
}

}  // namespace otstruct
