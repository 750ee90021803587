// SPDX-License-Identifier: Apache-2.0
#include "isac/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace isac {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "tx_antennas", "rx_antennas",   "symbols",       "users",         "target_angle_deg",
      "interferers", "target_power_db", "radar_noise_db", "comm_noise_db", "total_power_w",
      "rho",         "lambda",        "gamma",         "eps_primal",    "eps_dual",
      "max_inner",   "max_outer",     "seed",          "paper_stopping", "init",
      "outer_tol",   "tol_bisect"};
  return keys;
}

const char* init_name(InitMode mode) {
  switch (mode) {
    case InitMode::Auto: return "auto";
    case InitMode::ZeroMui: return "zero_mui";
    case InitMode::Lfm: return "lfm";
    case InitMode::RandomPhase: return "random";
  }
  return "auto";
}

InitMode parse_init(const std::string& name) {
  if (name == "auto") return InitMode::Auto;
  if (name == "zero_mui") return InitMode::ZeroMui;
  if (name == "lfm") return InitMode::Lfm;
  if (name == "random") return InitMode::RandomPhase;
  throw ConfigError("unknown init mode '" + name + "' (expected auto, zero_mui, lfm or random)");
}

template <typename T>
void read(const json& doc, const char* key, T& out) {
  if (auto it = doc.find(key); it != doc.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
  }
}

void read_db(const json& doc, const char* key, double& linear) {
  double db = 0.0;
  if (doc.contains(key)) {
    read(doc, key, db);
    linear = db_to_linear(db);
  }
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, const Scenario& defaults) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  for (const auto& [key, _] : doc.items())
    if (!known_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");

  Scenario s = defaults;
  read(doc, "tx_antennas", s.tx_antennas);
  read(doc, "rx_antennas", s.rx_antennas);
  read(doc, "symbols", s.symbols);
  read(doc, "users", s.users);
  if (doc.contains("target_angle_deg")) {
    double deg = 0.0;
    read(doc, "target_angle_deg", deg);
    s.target_angle = deg_to_rad(deg);
  }
  if (auto it = doc.find("interferers"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("'interferers' must be a list");
    s.interferers.clear();
    for (const auto& entry : *it) {
      if (!entry.is_object() || !entry.contains("angle_deg") || !entry.contains("power_db"))
        throw ConfigError("each interferer needs 'angle_deg' and 'power_db'");
      double angle = 0.0;
      double power = 0.0;
      read(entry, "angle_deg", angle);
      read(entry, "power_db", power);
      s.interferers.push_back({deg_to_rad(angle), db_to_linear(power)});
    }
  }
  read_db(doc, "target_power_db", s.target_power);
  read_db(doc, "radar_noise_db", s.radar_noise);
  read_db(doc, "comm_noise_db", s.comm_noise);
  read(doc, "total_power_w", s.total_power);
  read(doc, "rho", s.rho);
  read(doc, "lambda", s.lambda);
  read(doc, "gamma", s.gamma);
  read(doc, "eps_primal", s.eps_primal);
  read(doc, "eps_dual", s.eps_dual);
  read(doc, "max_inner", s.max_inner);
  read(doc, "max_outer", s.max_outer);
  read(doc, "seed", s.seed);
  read(doc, "paper_stopping", s.paper_stopping);
  if (doc.contains("init")) {
    std::string name;
    read(doc, "init", name);
    s.init = parse_init(name);
  }
  read(doc, "outer_tol", s.outer_tol);
  read(doc, "tol_bisect", s.tol_bisect);
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const Scenario& defaults) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), defaults);
}

std::string scenario_to_json(const Scenario& s, int indent) {
  json doc;
  doc["tx_antennas"] = s.tx_antennas;
  doc["rx_antennas"] = s.rx_antennas;
  doc["symbols"] = s.symbols;
  doc["users"] = s.users;
  doc["target_angle_deg"] = rad_to_deg(s.target_angle);
  doc["interferers"] = json::array();
  for (const auto& k : s.interferers)
    doc["interferers"].push_back({{"angle_deg", rad_to_deg(k.angle)}, {"power_db", linear_to_db(k.power)}});
  doc["target_power_db"] = linear_to_db(s.target_power);
  doc["radar_noise_db"] = linear_to_db(s.radar_noise);
  doc["comm_noise_db"] = linear_to_db(s.comm_noise);
  doc["total_power_w"] = s.total_power;
  doc["rho"] = s.rho;
  doc["lambda"] = s.lambda;
  doc["gamma"] = s.gamma;
  doc["eps_primal"] = s.eps_primal;
  doc["eps_dual"] = s.eps_dual;
  doc["max_inner"] = s.max_inner;
  doc["max_outer"] = s.max_outer;
  doc["seed"] = s.seed;
  doc["paper_stopping"] = s.paper_stopping;
  doc["init"] = init_name(s.init);
  doc["outer_tol"] = s.outer_tol;
  doc["tol_bisect"] = s.tol_bisect;
  return doc.dump(indent);
}

}  // namespace isac
