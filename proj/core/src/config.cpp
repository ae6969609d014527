#include "roomgreen/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "roomgreen/errors.hpp"

namespace roomgreen {

namespace {

using nlohmann::json;

double number_at(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw InputError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

Complex complex_from(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object() && j.contains("re")) {
    return {number_at(j, "re", where), j.contains("im") ? number_at(j, "im", where) : 0.0};
  }
  throw InputError(where + ": expected a complex value ([re, im] or {\"re\":..,\"im\":..})");
}

Admittance admittance_from(const json& j, const std::filesystem::path& base_dir,
                           const std::string& where) {
  if (j.is_object() && j.contains("table")) {
    if (!j.at("table").is_string()) throw InputError(where + ": 'table' must be a path");
    std::filesystem::path p = j.at("table").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return Admittance::load_table(p);
  }
  if (j.is_object() && j.contains("zeta")) {
    return Admittance::from_impedance(complex_from(j.at("zeta"), where + ".zeta"));
  }
  if (j.is_object() && j.contains("beta")) return Admittance::constant(complex_from(j.at("beta"), where));
  return Admittance::constant(complex_from(j, where));
}

}  // namespace

Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config must be a JSON object");

  Config cfg;
  if (doc.contains("speed_of_sound")) cfg.room.speed_of_sound = number_at(doc, "speed_of_sound", "config");
  if (!doc.contains("axes") || !doc.at("axes").is_array()) {
    throw InputError("config: 'axes' must be an array of 1-3 axis objects");
  }
  int index = 0;
  for (const json& a : doc.at("axes")) {
    const std::string where = "axes[" + std::to_string(index++) + "]";
    if (!a.is_object()) throw InputError(where + ": must be an object");
    AxisBoundary axis;
    axis.length = number_at(a, "length", where);
    axis.beta_minus = a.contains("beta_minus")
                          ? admittance_from(a.at("beta_minus"), base_dir, where + ".beta_minus")
                          : Admittance::constant({});
    axis.beta_plus = a.contains("beta_plus")
                         ? admittance_from(a.at("beta_plus"), base_dir, where + ".beta_plus")
                         : Admittance::constant({});
    cfg.room.axes.push_back(std::move(axis));
  }
  cfg.room.validate();

  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    if (!s.is_object()) throw InputError("config: 'solver' must be an object");
    auto& p = cfg.solver;
    if (s.contains("n_max")) {
      const json& n = s.at("n_max");
      if (!n.is_number_integer()) throw InputError("solver.n_max must be an integer");
      p.n_max = n.get<int>();
      cfg.explicit_n_max = true;
    }
    if (s.contains("n_max_factor")) {
      cfg.n_max_factor = number_at(s, "n_max_factor", "solver");
      if (!(*cfg.n_max_factor > 0.0)) throw InputError("solver.n_max_factor must be positive");
    }
    if (s.contains("n_newton")) p.n_newton = static_cast<int>(number_at(s, "n_newton", "solver"));
    if (s.contains("alpha_newton")) p.alpha_newton = number_at(s, "alpha_newton", "solver");
    if (s.contains("eps_newton")) p.eps_newton = number_at(s, "eps_newton", "solver");
    if (s.contains("dedup_tol")) p.dedup_tol = number_at(s, "dedup_tol", "solver");
    if (s.contains("zero_tol")) p.zero_tol = number_at(s, "zero_tol", "solver");
  }
  cfg.solver.validate();
  cfg.echo = doc.dump(2);
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

SolverParams params_at(const Config& config, double frequency) {
  SolverParams p = config.solver;
  if (!config.explicit_n_max && config.n_max_factor) {
    const WaveContext ctx = make_wave_context(config.room, frequency);
    double q_max = 0.0;
    for (double q : ctx.q) q_max = std::max(q_max, q);
    p.n_max = std::max(1, static_cast<int>(std::ceil(*config.n_max_factor * q_max)));
  }
  return p;
}

}  // namespace roomgreen
