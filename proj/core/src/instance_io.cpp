#include "rpkep/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

namespace rpkep::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Rational {
  Weight num = 0;
  Weight den = 1;
};

[[noreturn]] void fail(const std::string& locus, const std::string& code,
                       const std::string& detail) {
  throw SchemaError(locus, code, detail);
}

void require_keys(const json& obj, const std::string& locus,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail(locus + "/" + key, "unknown_field", "unexpected field");
}

const json& field(const json& obj, const std::string& locus, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(locus + "/" + key, "missing_field", "required field absent");
  return *it;
}

int int_field(const json& obj, const std::string& locus, const std::string& key) {
  const json& v = field(obj, locus, key);
  if (!v.is_number_integer()) fail(locus + "/" + key, "bad_type", "expected an integer");
  return v.get<int>();
}

Rational parse_rational(const json& v, const std::string& locus) {
  if (v.is_number_integer()) return {v.get<Weight>(), 1};
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    Rational r{v[0].get<Weight>(), v[1].get<Weight>()};
    if (r.den <= 0) fail(locus, "bad_rational", "denominator must be positive");
    return r;
  }
  fail(locus, "bad_type", "expected an integer or a [num, den] pair");
}

json rational_to_json(Weight num, Weight scale) {
  const Weight g = std::gcd(num, scale);
  const Weight n = g == 0 ? 0 : num / g;
  const Weight d = g == 0 ? 1 : scale / g;
  if (d == 1) return n;
  return json::array({n, d});
}

}  // namespace

SchemaError::SchemaError(std::string locus_in, std::string code_in, std::string detail)
    : std::runtime_error(locus_in + ": " + code_in + " (" + detail + ")"),
      locus(std::move(locus_in)),
      code(std::move(code_in)) {}

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "bad_type", "document must be an object");
  require_keys(doc, "", {"schema_version", "K", "L", "weight_mode", "agents",
                         "vertex_weights", "arcs"});

  const json& version = field(doc, "", "schema_version");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion)
    fail("/schema_version", "bad_schema_version", "expected \"" + std::string(kSchemaVersion) + "\"");

  InstanceDraft draft;
  draft.max_cycle_len = int_field(doc, "", "K");
  draft.max_chain_len = int_field(doc, "", "L");

  const json& mode = field(doc, "", "weight_mode");
  if (!mode.is_string()) fail("/weight_mode", "bad_type", "expected a string");
  const std::string mode_str = mode.get<std::string>();
  if (mode_str == "unit")
    draft.weight_mode = WeightMode::unit;
  else if (mode_str == "scored")
    draft.weight_mode = WeightMode::scored;
  else
    fail("/weight_mode", "bad_weight_mode", "expected \"unit\" or \"scored\"");

  const json& agents = field(doc, "", "agents");
  if (!agents.is_array()) fail("/agents", "bad_type", "expected an array");
  std::set<VertexId> seen;
  std::set<AgentId> seen_agents;
  struct PendingVertex {
    VertexId id;
    AgentId agent;
    VertexKind kind;
  };
  std::vector<PendingVertex> pending;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string locus = "/agents/" + std::to_string(i);
    const json& a = agents[i];
    if (!a.is_object()) fail(locus, "bad_type", "expected an object");
    require_keys(a, locus, {"id", "pairs", "ndds"});
    const AgentId agent_id = int_field(a, locus, "id");
    if (!seen_agents.insert(agent_id).second)
      fail(locus + "/id", "duplicate_agent", "agent listed twice");
    for (const char* key : {"pairs", "ndds"}) {
      const json& ids = field(a, locus, key);
      if (!ids.is_array()) fail(locus + "/" + key, "bad_type", "expected an array");
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const std::string vlocus = locus + "/" + key + "/" + std::to_string(j);
        if (!ids[j].is_number_integer()) fail(vlocus, "bad_type", "expected an integer");
        const VertexId v = ids[j].get<VertexId>();
        if (!seen.insert(v).second)
          fail(vlocus, "duplicate_vertex", "vertex " + std::to_string(v) + " listed twice");
        pending.push_back({v, agent_id,
                           std::string(key) == "pairs" ? VertexKind::pair : VertexKind::ndd});
      }
    }
  }

  // Weights: unit mode fills them in; scored mode reads per-vertex rationals
  // and rescales everything to the least common denominator.
  std::map<VertexId, std::pair<Rational, Rational>> weights;
  if (draft.weight_mode == WeightMode::scored) {
    const json& vw = field(doc, "", "vertex_weights");
    if (!vw.is_object()) fail("/vertex_weights", "bad_type", "expected an object");
    Weight scale = 1;
    for (const auto& [key, val] : vw.items()) {
      const std::string locus = "/vertex_weights/" + key;
      VertexId v = -1;
      try {
        v = std::stoi(key);
      } catch (const std::exception&) {
        fail(locus, "bad_vertex_key", "key must be a vertex id");
      }
      if (!seen.count(v)) fail(locus, "unknown_vertex", "vertex not declared by any agent");
      if (!val.is_object()) fail(locus, "bad_type", "expected an object");
      require_keys(val, locus, {"social", "agent"});
      Rational social = parse_rational(field(val, locus, "social"), locus + "/social");
      Rational agent = parse_rational(field(val, locus, "agent"), locus + "/agent");
      scale = std::lcm(scale, std::lcm(social.den, agent.den));
      weights[v] = {social, agent};
    }
    draft.weight_scale = scale;
  } else if (doc.contains("vertex_weights")) {
    fail("/vertex_weights", "unexpected_field", "vertex_weights requires scored mode");
  }

  for (const PendingVertex& pv : pending) {
    VertexRecord rec;
    rec.id = pv.id;
    rec.agent = pv.agent;
    rec.kind = pv.kind;
    if (draft.weight_mode == WeightMode::unit) {
      rec.social_weight = rec.agent_weight = pv.kind == VertexKind::pair ? 1 : 0;
    } else {
      auto it = weights.find(pv.id);
      if (it != weights.end()) {
        rec.social_weight = it->second.first.num * (draft.weight_scale / it->second.first.den);
        rec.agent_weight = it->second.second.num * (draft.weight_scale / it->second.second.den);
      }
    }
    draft.vertices.push_back(rec);
  }

  const json& arcs = field(doc, "", "arcs");
  if (!arcs.is_array()) fail("/arcs", "bad_type", "expected an array");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::string locus = "/arcs/" + std::to_string(i);
    const json& arc = arcs[i];
    if (!arc.is_array() || arc.size() != 2 || !arc[0].is_number_integer() ||
        !arc[1].is_number_integer())
      fail(locus, "bad_type", "expected a [from, to] pair");
    for (std::size_t j = 0; j < 2; ++j)
      if (!seen.count(arc[j].get<VertexId>()))
        fail(locus + "/" + std::to_string(j), "unknown_vertex",
             "arc endpoint not declared by any agent");
    draft.arcs.emplace_back(arc[0].get<VertexId>(), arc[1].get<VertexId>());
  }

  auto result = Instance::create(std::move(draft));
  if (auto* inst = std::get_if<Instance>(&result)) return std::move(*inst);
  const auto& violations = std::get<std::vector<Violation>>(result);
  fail("", violations.front().code, violations.front().detail);
}

ordered_json instance_to_json(const Instance& inst) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["K"] = inst.max_cycle_len();
  doc["L"] = inst.max_chain_len();
  doc["weight_mode"] = inst.weight_mode() == WeightMode::unit ? "unit" : "scored";

  doc["agents"] = ordered_json::array();
  for (AgentId a : inst.agents()) {
    ordered_json entry;
    entry["id"] = a;
    entry["pairs"] = ordered_json::array();
    entry["ndds"] = ordered_json::array();
    for (VertexId v : inst.agent_vertices(a)) {
      if (inst.vertex(v).kind == VertexKind::pair)
        entry["pairs"].push_back(v);
      else
        entry["ndds"].push_back(v);
    }
    doc["agents"].push_back(std::move(entry));
  }

  if (inst.weight_mode() == WeightMode::scored) {
    ordered_json vw = ordered_json::object();
    for (const VertexRecord& rec : inst.vertices()) {
      ordered_json entry;
      entry["social"] = rational_to_json(rec.social_weight, inst.weight_scale());
      entry["agent"] = rational_to_json(rec.agent_weight, inst.weight_scale());
      vw[std::to_string(rec.id)] = std::move(entry);
    }
    doc["vertex_weights"] = std::move(vw);
  }

  doc["arcs"] = ordered_json::array();
  for (const auto& [from, to] : inst.arcs()) doc["arcs"].push_back({from, to});
  return doc;
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError("", "parse_error", e.what());
  }
  return instance_from_json(doc);
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << instance_to_json(inst).dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace rpkep::io
