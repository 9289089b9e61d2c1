#include "nashseek/scenario.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nashseek/errors.hpp"

namespace nashseek {

using nlohmann::json;

namespace {

constexpr const char* kBuiltinPrefix = "builtin:";

// Initial actions of the seven-sensor example, player-major.
const double kInitialActions[7][2] = {{-5, 3}, {-4, -6}, {1, 8}, {0, -8}, {-1, 10}, {1, 2}, {3, 0}};
const double kControlGains[7][2] = {{3, 3}, {5, 5}, {-2, -2}, {1, 2}, {-3, -3}, {-1, -1}, {2, 2}};

const json& require(const json& node, const std::string& field, const std::string& key) {
  if (!node.is_object() || !node.contains(field)) {
    throw ConfigError(key.empty() ? field : key + "." + field, "missing required field");
  }
  return node.at(field);
}

double as_number(const json& node, const std::string& key) {
  if (!node.is_number()) throw ConfigError(key, "expected a number");
  return node.get<double>();
}

int as_int(const json& node, const std::string& key) {
  if (!node.is_number_integer()) throw ConfigError(key, "expected an integer");
  return node.get<int>();
}

std::string as_string(const json& node, const std::string& key) {
  if (!node.is_string()) throw ConfigError(key, "expected a string");
  return node.get<std::string>();
}

Vec as_vec(const json& node, const std::string& key) {
  if (!node.is_array()) throw ConfigError(key, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(node.size()));
  for (size_t k = 0; k < node.size(); ++k) v[static_cast<Eigen::Index>(k)] = as_number(node[k], key);
  return v;
}

Mat as_mat(const json& node, const std::string& key) {
  if (!node.is_array() || node.empty()) throw ConfigError(key, "expected a matrix (array of rows)");
  const size_t rows = node.size();
  const size_t cols = node[0].is_array() ? node[0].size() : 0;
  Mat m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!node[r].is_array() || node[r].size() != cols) throw ConfigError(key, "ragged matrix");
    for (size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_number(node[r][c], key);
    }
  }
  return m;
}

// Player-keyed objects use 1-based string keys ("1", "2", ...).
const json& player_entry(const json& players, int i, const std::string& key) {
  const std::string id = std::to_string(i + 1);
  if (!players.contains(id)) throw ConfigError(key + "." + id, "missing player entry");
  return players.at(id);
}

GameDefinition parse_game(const json& node) {
  if (node.contains("builtin")) {
    return GameRegistry::instance().make(as_string(node.at("builtin"), "game.builtin"));
  }
  const json& q = require(node, "quadratic", "game");
  const json& players = require(q, "players", "game.quadratic");
  if (!players.is_object() || players.empty()) {
    throw ConfigError("game.quadratic.players", "expected an object keyed by player number");
  }
  QuadraticGameSpec spec;
  const int n = static_cast<int>(players.size());
  for (int i = 0; i < n; ++i) {
    const std::string key = "game.quadratic.players." + std::to_string(i + 1);
    const json& p = player_entry(players, i, "game.quadratic.players");
    QuadraticGameSpec::Player player;
    player.self_term = as_mat(require(p, "m_ii", key), key + ".m_ii");
    player.linear = as_vec(require(p, "m_i", key), key + ".m_i");
    player.offset = p.contains("offset") ? as_number(p.at("offset"), key + ".offset") : 0.0;
    spec.players.push_back(std::move(player));
  }
  if (q.contains("couplings")) {
    for (const json& c : q.at("couplings")) {
      if (!c.is_array() || c.size() != 2) {
        throw ConfigError("game.quadratic.couplings", "each coupling is [owner, other]");
      }
      spec.couplings.emplace_back(as_int(c[0], "game.quadratic.couplings") - 1,
                                  as_int(c[1], "game.quadratic.couplings") - 1);
    }
  }
  GameDefinition game = make_quadratic_game(spec);
  if (node.contains("ne")) game.analytic_ne = as_vec(node.at("ne"), "game.ne");
  return game;
}

CommGraph parse_graph(const json& node) {
  const int n = as_int(require(node, "nodes", "graph"), "graph.nodes");
  const bool directed = node.contains("directed") && node.at("directed").get<bool>();
  std::vector<Edge> edges;
  if (node.contains("edges")) {
    const json& list = node.at("edges");
    if (!list.is_array()) throw ConfigError("graph.edges", "expected an array");
    for (size_t k = 0; k < list.size(); ++k) {
      const std::string key = "graph.edges." + std::to_string(k);
      const json& e = list[k];
      Edge edge;
      edge.from = as_int(require(e, "from", key), key + ".from") - 1;
      edge.to = as_int(require(e, "to", key), key + ".to") - 1;
      edge.weight = e.contains("weight") ? as_number(e.at("weight"), key + ".weight") : 1.0;
      edges.push_back(edge);
    }
  }
  return directed ? CommGraph::directed(n, edges) : CommGraph::undirected(n, edges);
}

EstimatorMode parse_estimator(const json& node, int n) {
  const std::string mode = node.contains("mode") ? as_string(node.at("mode"), "estimator.mode") : "fixed";
  if (mode == "adaptive") {
    if (node.contains("delta")) {
      throw ConfigError("estimator.delta", "adaptive mode does not take a global gain");
    }
    AdaptiveGains gains;
    const std::string idx = node.contains("gain_indexing")
                                ? as_string(node.at("gain_indexing"), "estimator.gain_indexing")
                                : "per_component";
    if (idx == "per_component") {
      gains.indexing = GainIndexing::PerComponent;
    } else if (idx == "per_channel") {
      gains.indexing = GainIndexing::PerChannel;
    } else {
      throw ConfigError("estimator.gain_indexing", "expected per_component or per_channel");
    }
    return gains;
  }
  if (mode != "fixed") throw ConfigError("estimator.mode", "expected fixed or adaptive");
  FixedGains gains;
  if (node.contains("delta")) gains.delta = as_number(node.at("delta"), "estimator.delta");
  if (node.contains("delta_bar")) {
    gains.delta_bar = Mat::Ones(n, n);
    for (const json& e : node.at("delta_bar")) {
      const int i = as_int(require(e, "i", "estimator.delta_bar"), "estimator.delta_bar.i") - 1;
      const int j = as_int(require(e, "j", "estimator.delta_bar"), "estimator.delta_bar.j") - 1;
      if (i < 0 || i >= n || j < 0 || j >= n) throw ConfigError("estimator.delta_bar", "index out of range");
      gains.delta_bar(i, j) = as_number(require(e, "value", "estimator.delta_bar"), "estimator.delta_bar.value");
    }
  }
  return gains;
}

Nonlinearity parse_phi(const json& node, const std::string& key) {
  if (node.is_null()) return make_nonlinearity("zero", 0.0);
  const std::string name = as_string(require(node, "name", key), key + ".name");
  const double c = node.contains("c") ? as_number(node.at("c"), key + ".c") : 0.0;
  try {
    return make_nonlinearity(name, c);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ".name", e.what());
  }
}

PlayerSetup parse_player(const json& p, int i, int dim) {
  const std::string key = "players." + std::to_string(i + 1);
  PlayerSetup setup;

  const std::string plant = as_string(require(p, "plant", key), key + ".plant");
  if (plant == "first_order") {
    setup.plant.kind = PlantKind::FirstOrder;
  } else if (plant == "second_order_chain") {
    setup.plant.kind = PlantKind::SecondOrderChain;
  } else if (plant == "general_second_order") {
    setup.plant.kind = PlantKind::GeneralSecondOrder;
  } else {
    throw ConfigError(key + ".plant", "unknown plant kind '" + plant + "'");
  }

  const std::string controller = as_string(require(p, "controller", key), key + ".controller");
  if (controller == "first_order") {
    setup.controller = ControllerFamily::FirstOrder;
  } else if (controller == "first_order_no_uncertainty") {
    setup.controller = ControllerFamily::FirstOrderNoUncertainty;
  } else if (controller == "second_order") {
    setup.controller = ControllerFamily::SecondOrder;
  } else if (controller == "backstepping") {
    setup.controller = ControllerFamily::Backstepping;
  } else {
    throw ConfigError(key + ".controller", "unknown controller family '" + controller + "'");
  }

  const std::string nussbaum = p.contains("nussbaum") ? as_string(p.at("nussbaum"), key + ".nussbaum") : "k2_sin";
  if (nussbaum == "k2_sin") {
    setup.nussbaum.kind = NussbaumKind::SinSquared;
  } else if (nussbaum == "k2_cos") {
    setup.nussbaum.kind = NussbaumKind::CosSquared;
  } else {
    throw ConfigError(key + ".nussbaum", "expected k2_sin or k2_cos");
  }

  setup.plant.phi = parse_phi(p.value("phi", json()), key + ".phi");
  setup.plant.phi2 = parse_phi(p.value("phi2", json()), key + ".phi2");
  setup.x0 = p.contains("x0") ? as_vec(p.at("x0"), key + ".x0") : Vec::Zero(dim);
  if (p.contains("v0")) setup.v0 = as_vec(p.at("v0"), key + ".v0");

  const json& hidden = require(p, "hidden", key);
  const std::string hkey = key + ".hidden";
  setup.plant.hidden.b = as_vec(require(hidden, "b", hkey), hkey + ".b");
  setup.plant.hidden.theta =
      hidden.contains("theta") ? as_vec(hidden.at("theta"), hkey + ".theta") : Vec::Ones(dim);
  if (setup.plant.kind == PlantKind::GeneralSecondOrder) {
    setup.plant.hidden.b2 = as_vec(require(hidden, "b2", hkey), hkey + ".b2");
    setup.plant.hidden.theta2 =
        hidden.contains("theta2") ? as_vec(hidden.at("theta2"), hkey + ".theta2") : Vec::Ones(dim);
  }
  return setup;
}

// ---- builtins ----------------------------------------------------------------

json cycle_graph(int n) {
  json edges = json::array();
  for (int i = 1; i <= n; ++i) edges.push_back({{"from", i}, {"to", i % n + 1}, {"weight", 1.0}});
  return {{"nodes", n}, {"directed", false}, {"edges", edges}};
}

json player(const std::string& plant, const std::string& controller, int i, double sign = 1.0) {
  const int idx = i - 1;
  json p = {{"plant", plant},
            {"controller", controller},
            {"nussbaum", "k2_sin"},
            {"phi", {{"name", "linear"}, {"c", static_cast<double>(i)}}},
            {"x0", {kInitialActions[idx][0], kInitialActions[idx][1]}},
            {"hidden",
             {{"b", {sign * kControlGains[idx][0], sign * kControlGains[idx][1]}},
              {"theta", {1.0, 1.0}}}}};
  return p;
}

json base_config(const std::string& name, double T) {
  return {{"name", name},
          {"game", {{"builtin", "connectivity"}}},
          {"graph", cycle_graph(7)},
          {"estimator", {{"mode", "fixed"}, {"delta", 10.0}}},
          {"integration", {{"T", T}, {"h", 2e-4}, {"stride", 500}}},
          {"tolerance", 1e-2}};
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"scenario_A", "scenario_B", "scenario_C", "scenario_D", "estimator_only", "scenario_A_flipped"};
}

json builtin_config(const std::string& name) {
  if (name == "scenario_A" || name == "scenario_A_flipped") {
    json cfg = base_config(name, 300.0);
    const double sign = name == "scenario_A" ? 1.0 : -1.0;
    for (int i = 1; i <= 7; ++i) cfg["players"][std::to_string(i)] = player("first_order", "first_order", i, sign);
    return cfg;
  }
  if (name == "scenario_B") {
    json cfg = base_config(name, 300.0);
    for (int i = 1; i <= 7; ++i) {
      cfg["players"][std::to_string(i)] = player("second_order_chain", "second_order", i);
    }
    return cfg;
  }
  if (name == "scenario_C") {
    json cfg = base_config(name, 300.0);
    for (int i = 1; i <= 6; ++i) {
      cfg["players"][std::to_string(i)] = player("second_order_chain", "second_order", i);
    }
    json p7 = player("general_second_order", "backstepping", 7);
    p7["phi"] = {{"name", "linear"}, {"c", 7.0}};
    p7["phi2"] = {{"name", "component_linear"}, {"c", 7.0}};
    p7["hidden"] = {{"b", {2.0, 2.0}}, {"theta", {1.0, 1.0}}, {"b2", {2.0, 2.0}}, {"theta2", {1.0, 1.0}}};
    cfg["players"]["7"] = p7;
    // Player 7's first seconds are very stiff: both Nussbaum stages sweep
    // through wrong-sign lobes while phi pushes x away.
    cfg["integration"]["h"] = 1e-4;
    cfg["integration"]["stride"] = 1000;
    cfg["integration"]["schedule"] = json::array({{{"until", 0.1}, {"h", 2e-7}},
                                                  {{"until", 0.7}, {"h", 1e-6}},
                                                  {{"until", 2.0}, {"h", 1e-5}}});
    return cfg;
  }
  if (name == "scenario_D") {
    json cfg = base_config(name, 300.0);
    cfg["estimator"] = {{"mode", "adaptive"}, {"gain_indexing", "per_component"}};
    for (int i = 1; i <= 7; ++i) cfg["players"][std::to_string(i)] = player("first_order", "first_order", i);
    return cfg;
  }
  if (name == "estimator_only") {
    json cfg = base_config(name, 40.0);
    cfg["integration"]["h"] = 1e-3;
    cfg["integration"]["stride"] = 10;
    cfg["tolerance"] = 1e-3;
    return cfg;
  }
  throw ConfigError("builtin", "unknown builtin scenario '" + name + "'");
}

void apply_override(json& document, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, "override must look like key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &document;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError(path, "empty path segment");
    parts.push_back(part);
  }
  for (size_t k = 0; k < parts.size(); ++k) {
    const bool last = k + 1 == parts.size();
    if (node->is_array()) {
      size_t idx = 0;
      try {
        idx = std::stoul(parts[k]);
      } catch (const std::exception&) {
        throw ConfigError(path, "'" + parts[k] + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError(path, "array index out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object() && !node->is_null()) throw ConfigError(path, "cannot descend into a scalar");
      node = &(*node)[parts[k]];
    }
    if (last) *node = value;
  }
}

ScenarioConfig parse_config(const json& document) {
  if (!document.is_object()) throw ConfigError("", "config must be a JSON object");
  ScenarioConfig cfg;
  cfg.document = document;
  Scenario& s = cfg.scenario;
  s.name = document.value("name", std::string("unnamed"));
  s.game = parse_game(require(document, "game", ""));
  const int n = s.game.n_players();
  s.graph = parse_graph(require(document, "graph", ""));
  s.estimator = parse_estimator(document.value("estimator", json::object()), n);

  if (document.contains("players") && !document.at("players").empty()) {
    const json& players = document.at("players");
    if (!players.is_object()) throw ConfigError("players", "expected an object keyed by player number");
    if (static_cast<int>(players.size()) != n) {
      throw ConfigError("players", "expected " + std::to_string(n) + " player entries, got " +
                                       std::to_string(players.size()));
    }
    for (int i = 0; i < n; ++i) {
      s.players.push_back(parse_player(player_entry(players, i, "players"), i, s.game.action_dims[i]));
    }
  }

  const json integ = document.value("integration", json::object());
  if (integ.contains("T")) s.integration.T = as_number(integ.at("T"), "integration.T");
  if (integ.contains("h")) s.integration.h = as_number(integ.at("h"), "integration.h");
  if (integ.contains("stride")) s.integration.stride = as_int(integ.at("stride"), "integration.stride");
  if (integ.contains("schedule")) {
    const json& list = integ.at("schedule");
    if (!list.is_array()) throw ConfigError("integration.schedule", "expected an array");
    for (size_t k = 0; k < list.size(); ++k) {
      const std::string key = "integration.schedule." + std::to_string(k);
      s.integration.schedule.push_back({as_number(require(list[k], "until", key), key + ".until"),
                                        as_number(require(list[k], "h", key), key + ".h")});
    }
  }
  if (integ.contains("divergence_bound")) {
    s.integration.divergence_bound = as_number(integ.at("divergence_bound"), "integration.divergence_bound");
  }
  if (document.contains("tolerance")) {
    cfg.tolerance = as_number(document.at("tolerance"), "tolerance");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
  }
  s.config_hash = config_hash(document);
  validate(s);
  return cfg;
}

json load_document(const std::string& source) {
  if (source.rfind(kBuiltinPrefix, 0) == 0) return builtin_config(source.substr(std::char_traits<char>::length(kBuiltinPrefix)));
  std::ifstream in(source);
  if (!in) throw ConfigError("", "cannot read config file '" + source + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("", "config file '" + source + "' is not valid JSON");
  return doc;
}

ScenarioConfig load_config(const std::string& source, const std::vector<std::string>& overrides) {
  json doc = load_document(source);
  for (const std::string& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

json redact_hidden(const json& document) {
  json out = document;
  if (out.contains("players") && out["players"].is_object()) {
    for (auto& [id, p] : out["players"].items()) {
      if (p.is_object() && p.contains("hidden")) p["hidden"] = "<redacted>";
    }
  }
  return out;
}

std::string config_hash(const json& document) {
  const std::string text = document.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nashseek
