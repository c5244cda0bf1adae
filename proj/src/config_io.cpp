#include "gradolab/config_io.hpp"

#include <json.hpp>

namespace gradolab {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key \"" + std::string(key) + "\" in " + where);
  if (!obj[key].is_number())
    throw ConfigError("key \"" + std::string(key) + "\" in " + where + " must be a number");
  return obj[key].get<double>();
}

double optional_number(const json& obj, const char* key, double fallback,
                       const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw ConfigError("key \"" + std::string(key) + "\" in " + where + " must be a number");
  return obj[key].get<double>();
}

}  // namespace

RunSetup parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown_keys(doc, {"time_unit", "reactors", "flow_q", "s_in", "species", "initial",
                            "ode", "rtm"},
                      "config root");

  double rate_scale = 1.0;  // divide rates, multiply times
  if (doc.contains("time_unit")) {
    const std::string unit = doc["time_unit"].get<std::string>();
    if (unit == "day")
      rate_scale = 86400.0;
    else if (unit != "s")
      throw ConfigError("time_unit must be \"s\" or \"day\"");
  }

  RunSetup setup;
  NetworkConfig& cfg = setup.cfg;

  if (!doc.contains("reactors") || !doc["reactors"].is_array())
    throw ConfigError("config requires a \"reactors\" array");
  for (size_t i = 0; i < doc["reactors"].size(); ++i) {
    const json& r = doc["reactors"][i];
    const std::string where = "reactors[" + std::to_string(i) + "]";
    if (!r.is_object()) throw ConfigError(where + " must be an object");
    reject_unknown_keys(r, {"volume"}, where);
    cfg.reactors.push_back(Reactor{require_number(r, "volume", where)});
  }

  cfg.flow_q = require_number(doc, "flow_q", "config root") / rate_scale;
  cfg.s_in = require_number(doc, "s_in", "config root");

  if (!doc.contains("species") || !doc["species"].is_array())
    throw ConfigError("config requires a \"species\" array");
  for (size_t j = 0; j < doc["species"].size(); ++j) {
    const json& sp = doc["species"][j];
    const std::string where = "species[" + std::to_string(j) + "]";
    if (!sp.is_object()) throw ConfigError(where + " must be an object");
    reject_unknown_keys(sp, {"name", "mu_max", "k_s", "yield"}, where);
    Species s;
    s.name = sp.contains("name") ? sp["name"].get<std::string>() : "B" + std::to_string(j + 1);
    s.kinetics.mu_max = require_number(sp, "mu_max", where) / rate_scale;
    s.kinetics.k_s = require_number(sp, "k_s", where);
    s.yield_k = optional_number(sp, "yield", 1.0, where);
    cfg.species.push_back(std::move(s));
  }

  if (!doc.contains("initial") || !doc["initial"].is_array())
    throw ConfigError("config requires an \"initial\" array (one entry per reactor)");
  const int m = cfg.n_species();
  std::vector<double> flat;
  for (size_t i = 0; i < doc["initial"].size(); ++i) {
    const json& cell = doc["initial"][i];
    const std::string where = "initial[" + std::to_string(i) + "]";
    if (!cell.is_object()) throw ConfigError(where + " must be an object");
    reject_unknown_keys(cell, {"S", "B"}, where);
    flat.push_back(require_number(cell, "S", where));
    if (!cell.contains("B") || !cell["B"].is_array())
      throw ConfigError(where + " requires a \"B\" array");
    for (const json& b : cell["B"]) {
      if (!b.is_number()) throw ConfigError(where + ".B entries must be numbers");
      flat.push_back(b.get<double>());
    }
    if (static_cast<int>(cell["B"].size()) != m)
      throw ConfigError(where + ": B has " + std::to_string(cell["B"].size()) +
                        " entries, expected one per species (" + std::to_string(m) + ")");
  }
  cfg.initial.c = Eigen::Map<Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));

  if (doc.contains("ode")) {
    const json& o = doc["ode"];
    reject_unknown_keys(o, {"method", "dt_init", "dt_max", "rel_tol", "abs_tol", "t_max",
                            "ss_tol"},
                        "ode");
    if (o.contains("method")) {
      const std::string method = o["method"].get<std::string>();
      if (method == "rk4")
        setup.ode.method = OdeMethod::Rk4Fixed;
      else if (method == "rk45")
        setup.ode.method = OdeMethod::Rk45Adaptive;
      else
        throw ConfigError("ode.method must be \"rk4\" or \"rk45\"");
    }
    setup.ode.dt_init = optional_number(o, "dt_init", setup.ode.dt_init / rate_scale, "ode") * rate_scale;
    setup.ode.dt_max = optional_number(o, "dt_max", setup.ode.dt_max / rate_scale, "ode") * rate_scale;
    setup.ode.rel_tol = optional_number(o, "rel_tol", setup.ode.rel_tol, "ode");
    setup.ode.abs_tol = optional_number(o, "abs_tol", setup.ode.abs_tol, "ode");
    setup.ode.t_max = optional_number(o, "t_max", 0.0, "ode") * rate_scale;
    setup.ode_ss_tol = optional_number(o, "ss_tol", setup.ode_ss_tol * rate_scale, "ode") / rate_scale;
    if (!(setup.ode.dt_init <= setup.ode.dt_max))
      throw ConfigError("ode: dt_init must not exceed dt_max");
    if (!(setup.ode.rel_tol > 0.0) || !(setup.ode.abs_tol > 0.0) || !(setup.ode_ss_tol > 0.0))
      throw ConfigError("ode: tolerances must be positive");
  }

  if (doc.contains("rtm")) {
    const json& r = doc["rtm"];
    reject_unknown_keys(r, {"dt_init", "dt_max", "newton_tol", "newton_max_iter", "dt_growth",
                            "floor", "inflow_biomass", "ss_tol", "t_max"},
                        "rtm");
    RtmOptions& opt = setup.rtm;
    opt.dt_init = optional_number(r, "dt_init", opt.dt_init / rate_scale, "rtm") * rate_scale;
    opt.dt_max = optional_number(r, "dt_max", opt.dt_max / rate_scale, "rtm") * rate_scale;
    opt.newton_tol = optional_number(r, "newton_tol", opt.newton_tol, "rtm");
    opt.newton_max_iter =
        static_cast<int>(optional_number(r, "newton_max_iter", opt.newton_max_iter, "rtm"));
    opt.dt_growth = optional_number(r, "dt_growth", opt.dt_growth, "rtm");
    opt.floor = optional_number(r, "floor", opt.floor, "rtm");
    opt.inflow_biomass = optional_number(r, "inflow_biomass", opt.floor, "rtm");
    opt.ss_tol = optional_number(r, "ss_tol", opt.ss_tol * rate_scale, "rtm") / rate_scale;
    opt.t_max = optional_number(r, "t_max", 0.0, "rtm") * rate_scale;
    if (!(opt.dt_init > 0.0) || !(opt.dt_init <= opt.dt_max))
      throw ConfigError("rtm: need 0 < dt_init <= dt_max");
    if (!(opt.floor > 0.0)) throw ConfigError("rtm: floor must be positive");
    if (!(opt.inflow_biomass >= opt.floor))
      throw ConfigError("rtm: inflow_biomass must be at least the floor");
    if (!(opt.newton_tol > 0.0) || !(opt.ss_tol > 0.0))
      throw ConfigError("rtm: tolerances must be positive");
    if (opt.newton_max_iter < 1) throw ConfigError("rtm: newton_max_iter must be at least 1");
    if (!(opt.dt_growth >= 1.0)) throw ConfigError("rtm: dt_growth must be at least 1");
  }

  validate_network(cfg);
  return setup;
}

std::string serialize_config(const RunSetup& setup) {
  json doc;
  doc["time_unit"] = "s";
  doc["reactors"] = json::array();
  for (const auto& r : setup.cfg.reactors) doc["reactors"].push_back({{"volume", r.volume}});
  doc["flow_q"] = setup.cfg.flow_q;
  doc["s_in"] = setup.cfg.s_in;
  doc["species"] = json::array();
  for (const auto& sp : setup.cfg.species)
    doc["species"].push_back({{"name", sp.name},
                              {"mu_max", sp.kinetics.mu_max},
                              {"k_s", sp.kinetics.k_s},
                              {"yield", sp.yield_k}});
  doc["initial"] = json::array();
  const int m = setup.cfg.n_species();
  for (int i = 0; i < setup.cfg.n_cells(); ++i) {
    json cell;
    cell["S"] = setup.cfg.initial.substrate(i, m);
    cell["B"] = json::array();
    for (int j = 0; j < m; ++j) cell["B"].push_back(setup.cfg.initial.biomass(i, j, m));
    doc["initial"].push_back(std::move(cell));
  }
  doc["ode"] = {{"method", setup.ode.method == OdeMethod::Rk4Fixed ? "rk4" : "rk45"},
                {"dt_init", setup.ode.dt_init},
                {"dt_max", setup.ode.dt_max},
                {"rel_tol", setup.ode.rel_tol},
                {"abs_tol", setup.ode.abs_tol},
                {"t_max", setup.ode.t_max},
                {"ss_tol", setup.ode_ss_tol}};
  doc["rtm"] = {{"dt_init", setup.rtm.dt_init},
                {"dt_max", setup.rtm.dt_max},
                {"newton_tol", setup.rtm.newton_tol},
                {"newton_max_iter", setup.rtm.newton_max_iter},
                {"dt_growth", setup.rtm.dt_growth},
                {"floor", setup.rtm.floor},
                {"inflow_biomass", setup.rtm.inflow_biomass},
                {"ss_tol", setup.rtm.ss_tol},
                {"t_max", setup.rtm.t_max}};
  return doc.dump(2) + "\n";
}

}  // namespace gradolab
