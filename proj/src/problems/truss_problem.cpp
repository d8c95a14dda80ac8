#include "memopt/problems/truss_problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "memopt/core/errors.hpp"

namespace memopt {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw ConfigError(source_ + ": " + where + ": " + what);
  }

  const json& field(const json& obj, const char* key, const std::string& where) const {
    if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing '") + key + "'");
    return obj.at(key);
  }

  double number(const json& obj, const char* key, const std::string& where) const {
    const json& v = field(obj, key, where);
    if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where, std::string("'") + key + "' must be finite");
    return d;
  }

  double number_or(const json& obj, const char* key, double fallback, const std::string& where) const {
    return obj.contains(key) ? number(obj, key, where) : fallback;
  }

  int integer(const json& obj, const char* key, const std::string& where) const {
    const json& v = field(obj, key, where);
    if (!v.is_number_integer()) fail(where, std::string("'") + key + "' must be an integer");
    return v.get<int>();
  }

  bool flag(const json& obj, const char* key, const std::string& where) const {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(where, std::string("'") + key + "' must be true or false");
    return v.get<bool>();
  }

  std::string text(const json& obj, const char* key, const std::string& where) const {
    const json& v = field(obj, key, where);
    if (!v.is_string()) fail(where, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
  }

  const json& array(const json& obj, const char* key, const std::string& where) const {
    const json& v = field(obj, key, where);
    if (!v.is_array()) fail(where, std::string("'") + key + "' must be an array");
    return v;
  }

  fem::Axis axis(const json& obj, const std::string& where) const {
    const std::string a = text(obj, "axis", where);
    if (a == "x") return fem::Axis::x;
    if (a == "y") return fem::Axis::y;
    fail(where, "axis must be \"x\" or \"y\"");
  }

 private:
  std::string source_;
};

double& coordinate(fem::Node& node, fem::Axis axis) { return axis == fem::Axis::x ? node.x : node.y; }
double coordinate(const fem::Node& node, fem::Axis axis) { return axis == fem::Axis::x ? node.x : node.y; }

// For every coordinate variable, a target it drives alone (so `contract` can
// read the value back). Returns -1 when none exists.
std::vector<int> sole_targets(const TrussDefinition& def) {
  std::map<std::pair<std::size_t, int>, int> contributors;
  for (const DesignVariable& v : def.variables) {
    for (const CoordinateTarget& t : v.targets) ++contributors[{t.node, static_cast<int>(t.axis)}];
  }
  std::vector<int> out(def.variables.size(), -1);
  for (std::size_t k = 0; k < def.variables.size(); ++k) {
    const auto& targets = def.variables[k].targets;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (targets[t].factor != 0.0 && contributors[{targets[t].node, static_cast<int>(targets[t].axis)}] == 1) {
        out[k] = static_cast<int>(t);
        break;
      }
    }
  }
  return out;
}

}  // namespace

TrussDefinition parse_truss_definition(const std::string& text, const std::string& source) {
  const Reader rd(source);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) rd.fail("document", "top level must be an object");

  TrussDefinition def;
  def.name = rd.text(doc, "name", "document");
  if (doc.contains("description") && doc["description"].is_string()) def.description = doc["description"];

  const json& mat = rd.field(doc, "material", "document");
  def.base.material.young_modulus = rd.number(mat, "young_modulus", "material");
  def.base.material.density = rd.number(mat, "density", "material");

  std::map<int, std::size_t> node_index;
  for (const json& n : rd.array(doc, "nodes", "document")) {
    const int id = rd.integer(n, "id", "nodes");
    const std::string where = "node " + std::to_string(id);
    if (!node_index.emplace(id, def.base.nodes.size()).second) rd.fail(where, "duplicate id");
    def.base.nodes.push_back({rd.number(n, "x", where), rd.number(n, "y", where)});
    def.node_ids.push_back(id);
  }
  const std::size_t n_nodes = def.base.nodes.size();
  def.base.supports.assign(n_nodes, {});
  def.base.loads.assign(n_nodes, {});
  def.base.lumped_masses.assign(n_nodes, 0.0);

  auto lookup = [&](int id, const std::string& where) {
    const auto it = node_index.find(id);
    if (it == node_index.end()) rd.fail(where, "unknown node " + std::to_string(id));
    return it->second;
  };

  std::map<int, bool> element_seen;
  for (const json& e : rd.array(doc, "elements", "document")) {
    const int id = rd.integer(e, "id", "elements");
    const std::string where = "element " + std::to_string(id);
    if (!element_seen.emplace(id, true).second) rd.fail(where, "duplicate id");
    const json& ends = rd.array(e, "nodes", where);
    if (ends.size() != 2 || !ends[0].is_number_integer() || !ends[1].is_number_integer()) {
      rd.fail(where, "'nodes' must hold two node ids");
    }
    fem::Element el;
    el.a = lookup(ends[0].get<int>(), where);
    el.b = lookup(ends[1].get<int>(), where);
    el.group = rd.integer(e, "group", where);
    el.area = rd.number_or(e, "area", 0.0, where);
    def.base.elements.push_back(el);
    def.element_ids.push_back(id);
  }

  for (const json& s : rd.array(doc, "supports", "document")) {
    const std::size_t k = lookup(rd.integer(s, "node", "supports"), "supports");
    def.base.supports[k].fix_x = def.base.supports[k].fix_x || rd.flag(s, "fix_x", "supports");
    def.base.supports[k].fix_y = def.base.supports[k].fix_y || rd.flag(s, "fix_y", "supports");
  }
  if (doc.contains("loads")) {
    for (const json& l : rd.array(doc, "loads", "document")) {
      const std::size_t k = lookup(rd.integer(l, "node", "loads"), "loads");
      def.base.loads[k].fx += rd.number_or(l, "fx", 0.0, "loads");
      def.base.loads[k].fy += rd.number_or(l, "fy", 0.0, "loads");
    }
  }
  if (doc.contains("masses")) {
    for (const json& m : rd.array(doc, "masses", "document")) {
      const std::size_t k = lookup(rd.integer(m, "node", "masses"), "masses");
      def.base.lumped_masses[k] += rd.number(m, "mass", "masses");
    }
  }

  if (doc.contains("constraints")) {
    const json& c = doc["constraints"];
    if (c.contains("stress_limit")) def.stress_limit = rd.number(c, "stress_limit", "constraints");
    if (c.contains("displacement")) {
      for (const json& d : rd.array(c, "displacement", "constraints")) {
        NodalDisplacementBound b;
        const json& node = rd.field(d, "node", "displacement");
        if (node.is_string() && node.get<std::string>() == "all") {
          b.all_nodes = true;
        } else if (node.is_number_integer()) {
          b.node = lookup(node.get<int>(), "displacement");
        } else {
          rd.fail("displacement", "'node' must be a node id or \"all\"");
        }
        b.axis = rd.axis(d, "displacement");
        b.limit = rd.number(d, "limit", "displacement");
        if (!(b.limit > 0.0)) rd.fail("displacement", "limit must be positive");
        def.displacement_bounds.push_back(b);
      }
    }
    if (c.contains("frequency_lower_bounds")) {
      for (const json& f : rd.array(c, "frequency_lower_bounds", "constraints")) {
        if (!f.is_number() || !(f.get<double>() > 0.0)) rd.fail("constraints", "frequency bounds must be positive");
        def.frequency_lower_bounds.push_back(f.get<double>());
      }
    }
    if (def.stress_limit && !(*def.stress_limit > 0.0)) rd.fail("constraints", "stress_limit must be positive");
  }

  for (const json& v : rd.array(doc, "variables", "document")) {
    DesignVariable var;
    var.name = rd.text(v, "name", "variables");
    const std::string where = "variable " + var.name;
    const std::string kind = rd.text(v, "kind", where);
    var.lower = rd.number(v, "lower", where);
    var.upper = rd.number(v, "upper", where);
    var.scale = rd.number_or(v, "scale", 1.0, where);
    var.grid_step = rd.number_or(v, "grid_step", 0.0, where);
    if (!(var.lower <= var.upper)) rd.fail(where, "lower exceeds upper");
    if (var.scale == 0.0) rd.fail(where, "scale must be nonzero");
    if (kind == "area") {
      var.kind = VariableKind::area;
      for (const json& g : rd.array(v, "groups", where)) {
        if (!g.is_number_integer()) rd.fail(where, "groups must be integers");
        var.groups.push_back(g.get<int>());
      }
      if (var.groups.empty()) rd.fail(where, "no groups");
      if (!(var.lower * var.scale > 0.0)) rd.fail(where, "areas must be positive");
    } else if (kind == "coordinate") {
      var.kind = VariableKind::coordinate;
      for (const json& t : rd.array(v, "targets", where)) {
        CoordinateTarget target;
        target.node = lookup(rd.integer(t, "node", where), where);
        target.axis = rd.axis(t, where);
        target.factor = rd.number_or(t, "factor", 1.0, where);
        const std::string mode = t.contains("mode") ? rd.text(t, "mode", where) : "absolute";
        if (mode != "absolute" && mode != "offset") rd.fail(where, "mode must be \"absolute\" or \"offset\"");
        target.absolute = mode == "absolute";
        var.targets.push_back(target);
      }
      if (var.targets.empty()) rd.fail(where, "no targets");
    } else {
      rd.fail(where, "kind must be \"area\" or \"coordinate\"");
    }
    def.variables.push_back(std::move(var));
  }
  if (def.variables.empty()) rd.fail("document", "no design variables");

  // Cross-checks: each element sized exactly once, coordinate targets consistent.
  std::map<int, std::size_t> group_owner;
  for (std::size_t k = 0; k < def.variables.size(); ++k) {
    for (int g : def.variables[k].groups) {
      if (!group_owner.emplace(g, k).second) rd.fail("variables", "group " + std::to_string(g) + " sized twice");
    }
  }
  for (std::size_t e = 0; e < def.base.elements.size(); ++e) {
    const fem::Element& el = def.base.elements[e];
    const bool sized = group_owner.count(el.group) > 0;
    const std::string where = "element " + std::to_string(def.element_ids[e]);
    if (sized && el.area != 0.0) rd.fail(where, "has a fixed area but its group is a design variable");
    if (!sized && !(el.area > 0.0)) rd.fail(where, "needs a fixed positive area or a sizing variable");
  }
  std::map<std::pair<std::size_t, int>, std::pair<int, int>> modes;  // (absolute, offset) counts
  for (const DesignVariable& v : def.variables) {
    for (const CoordinateTarget& t : v.targets) {
      auto& m = modes[{t.node, static_cast<int>(t.axis)}];
      (t.absolute ? m.first : m.second) += 1;
    }
  }
  for (const auto& [key, count] : modes) {
    if (count.first > 1 || (count.first == 1 && count.second > 0)) {
      rd.fail("variables", "node " + std::to_string(def.node_ids[key.first]) +
                               " has conflicting absolute coordinate targets");
    }
  }
  const auto sole = sole_targets(def);
  for (std::size_t k = 0; k < def.variables.size(); ++k) {
    if (def.variables[k].kind == VariableKind::coordinate && sole[k] < 0) {
      rd.fail("variable " + def.variables[k].name, "needs one target it drives alone");
    }
  }
  return def;
}

TrussDefinition load_truss_definition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open truss geometry file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_truss_definition(buf.str(), path.string());
}

TrussProblem::TrussProblem(TrussDefinition definition) : definition_(std::move(definition)) {
  std::vector<double> lower;
  std::vector<double> upper;
  for (const DesignVariable& v : definition_.variables) {
    lower.push_back(v.lower);
    upper.push_back(v.upper);
  }
  space_ = SearchSpace(lower, upper);
  for (std::size_t k = 0; k < definition_.variables.size(); ++k) {
    const DesignVariable& v = definition_.variables[k];
    if (v.grid_step > 0.0) space_.set_grid(k, SearchSpace::make_grid(v.lower, v.upper, v.grid_step));
  }
  group_variable_.assign(definition_.base.elements.size(), -1);
  for (std::size_t e = 0; e < definition_.base.elements.size(); ++e) {
    for (std::size_t k = 0; k < definition_.variables.size(); ++k) {
      const auto& groups = definition_.variables[k].groups;
      if (std::find(groups.begin(), groups.end(), definition_.base.elements[e].group) != groups.end()) {
        group_variable_[e] = static_cast<int>(k);
      }
    }
  }
}

std::vector<double> TrussProblem::decode(std::span<const double> x) const {
  return snap_to_grid(x, space_);
}

ExpandedDesign TrussProblem::expand(std::span<const double> x) const {
  if (x.size() != space_.dim()) throw StructuralError("truss design vector has the wrong dimension");
  ExpandedDesign out;
  out.nodes = definition_.base.nodes;
  out.areas.reserve(definition_.base.elements.size());
  for (std::size_t e = 0; e < definition_.base.elements.size(); ++e) {
    const int k = group_variable_[e];
    out.areas.push_back(k < 0 ? definition_.base.elements[e].area
                              : x[static_cast<std::size_t>(k)] * definition_.variables[static_cast<std::size_t>(k)].scale);
  }
  for (std::size_t k = 0; k < definition_.variables.size(); ++k) {
    const DesignVariable& v = definition_.variables[k];
    for (const CoordinateTarget& t : v.targets) {
      const double value = t.factor * x[k] * v.scale;
      double& c = coordinate(out.nodes[t.node], t.axis);
      c = t.absolute ? value : c + value;
    }
  }
  return out;
}

std::vector<double> TrussProblem::contract(const ExpandedDesign& design) const {
  if (design.areas.size() != definition_.base.elements.size() ||
      design.nodes.size() != definition_.base.nodes.size()) {
    throw StructuralError("expanded design does not match the truss definition");
  }
  const auto sole = sole_targets(definition_);
  std::vector<double> x(space_.dim(), 0.0);
  for (std::size_t k = 0; k < definition_.variables.size(); ++k) {
    const DesignVariable& v = definition_.variables[k];
    if (v.kind == VariableKind::area) {
      const auto it = std::find(group_variable_.begin(), group_variable_.end(), static_cast<int>(k));
      if (it == group_variable_.end()) continue;  // sizing variable of an empty group
      x[k] = design.areas[static_cast<std::size_t>(it - group_variable_.begin())] / v.scale;
    } else {
      const CoordinateTarget& t = v.targets[static_cast<std::size_t>(sole[k])];
      double c = coordinate(design.nodes[t.node], t.axis);
      if (!t.absolute) c -= coordinate(definition_.base.nodes[t.node], t.axis);
      x[k] = c / (t.factor * v.scale);
    }
  }
  return x;
}

fem::TrussModel TrussProblem::build_model(std::span<const double> x) const {
  const ExpandedDesign design = expand(x);
  fem::TrussModel model = definition_.base;
  model.nodes = design.nodes;
  for (std::size_t e = 0; e < model.elements.size(); ++e) model.elements[e].area = design.areas[e];
  return model;
}

fem::ConstraintLimits TrussProblem::limits() const {
  fem::ConstraintLimits limits;
  limits.stress_limit = definition_.stress_limit;
  const auto& supports = definition_.base.supports;
  for (const NodalDisplacementBound& b : definition_.displacement_bounds) {
    if (!b.all_nodes) {
      limits.displacement.push_back({b.node, b.axis, b.limit});
      continue;
    }
    for (std::size_t n = 0; n < supports.size(); ++n) {
      const bool fixed = b.axis == fem::Axis::x ? supports[n].fix_x : supports[n].fix_y;
      if (!fixed) limits.displacement.push_back({n, b.axis, b.limit});
    }
  }
  limits.frequency_lower_bounds = definition_.frequency_lower_bounds;
  return limits;
}

Evaluation TrussProblem::evaluate(std::span<const double> x) const {
  const fem::TrussModel model = build_model(decode(x));
  const double weight = fem::structural_weight(model);
  if (fem::min_element_length(model) < kDegenerateLength) return {weight, {kDegenerateViolation}};

  const fem::ConstraintLimits lim = limits();
  try {
    fem::AnalysisResult result;
    if (lim.stress_limit || !lim.displacement.empty()) {
      result = fem::solve_static(model);
    } else {
      result.weight = weight;
    }
    if (!lim.frequency_lower_bounds.empty()) {
      result.frequencies = fem::natural_frequencies(model, lim.frequency_lower_bounds.size());
    }
    return {weight, fem::evaluate_constraints(result, lim)};
  } catch (const AnalysisError&) {
    return {weight, {kDegenerateViolation}};
  }
}

}  // namespace memopt
