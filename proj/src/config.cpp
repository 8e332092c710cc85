#include "smpc/config.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "smpc/csv.hpp"
#include "smpc/errors.hpp"

namespace smpc {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"simulation", {"duration", "t_s", "substeps", "seed", "sensor_noise", "output"}},
      {"plant",
       {"r_s", "l_s", "psi_pm", "pole_pairs", "r_n", "l_n", "e_peak", "omega_n", "capacitance",
        "inertia"}},
      {"initial", {"omega_m", "theta_e", "v_dc", "v_o"}},
      {"references", {"speed_rpm", "load_torque", "speed_gain", "torque_limit", "v_dc_ref"}},
      {"pi", {"k_p", "k_i", "clamp"}},
      {"controller", {"horizon", "nk", "nl", "lambda", "lambda_v", "mode"}},
      {"sweep", {"horizon", "nk", "nl", "lambda", "mode"}},
  };
  return keys;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
  }
}

long to_long(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto& p : parts) boost::trim(p);
  std::erase_if(parts, [](const std::string& p) { return p.empty(); });
  return parts;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  void num(const std::string& path, double& out) const {
    if (auto v = get(path)) out = to_double(path, *v);
  }
  void integer(const std::string& path, int& out) const {
    if (auto v = get(path)) out = static_cast<int>(to_long(path, *v));
  }
  void text(const std::string& path, std::string& out) const {
    if (auto v = get(path)) out = *v;
  }
  template <typename T, typename F>
  void list(const std::string& path, std::vector<T>& out, F convert) const {
    if (auto v = get(path)) {
      out.clear();
      for (const auto& item : split_list(*v)) out.push_back(convert(path, item));
      if (out.empty()) throw ConfigError("'" + path + "': empty list");
    }
  }

 private:
  std::optional<std::string> get(const std::string& path) const {
    auto v = tree_.get_optional<std::string>(path);
    if (!v) return std::nullopt;
    std::string s = *v;
    boost::trim(s);
    return s;
  }
  const pt::ptree& tree_;
};

}  // namespace

StepProfile parse_profile(const std::string& text) {
  StepProfile profile;
  for (const auto& item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("profile entry '" + item + "' must be time:value");
    }
    std::string t = item.substr(0, colon);
    std::string v = item.substr(colon + 1);
    boost::trim(t);
    boost::trim(v);
    profile.points.emplace_back(to_double("profile time", t), to_double("profile value", v));
  }
  if (profile.points.empty()) throw ConfigError("profile must have at least one breakpoint");
  if (!profile.sorted()) throw ConfigError("profile breakpoints must be sorted by time");
  return profile;
}

std::string format_profile(const StepProfile& profile) {
  std::string out;
  for (const auto& [t, v] : profile.points) {
    if (!out.empty()) out += ", ";
    out += format_number(t) + ":" + format_number(v);
  }
  return out;
}

ScenarioConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("unknown config section [" + section + "]");
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' outside of a section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }

  ScenarioConfig cfg;
  const Reader r(tree);
  r.num("simulation.duration", cfg.duration);
  r.num("simulation.t_s", cfg.t_s);
  r.integer("simulation.substeps", cfg.substeps);
  int seed = static_cast<int>(cfg.seed);
  r.integer("simulation.seed", seed);
  if (seed < 0) throw ConfigError("seed must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  r.num("simulation.sensor_noise", cfg.sensor_noise);
  r.text("simulation.output", cfg.output_dir);

  r.num("plant.r_s", cfg.plant.machine.r_s);
  r.num("plant.l_s", cfg.plant.machine.l_s);
  r.num("plant.psi_pm", cfg.plant.machine.psi_pm);
  r.integer("plant.pole_pairs", cfg.plant.machine.pole_pairs);
  r.num("plant.r_n", cfg.plant.grid.r_n);
  r.num("plant.l_n", cfg.plant.grid.l_n);
  r.num("plant.e_peak", cfg.plant.grid.e_peak);
  r.num("plant.omega_n", cfg.plant.grid.omega_n);
  r.num("plant.capacitance", cfg.plant.capacitance);
  r.num("plant.inertia", cfg.inertia);

  r.num("initial.omega_m", cfg.omega_m0);
  r.num("initial.theta_e", cfg.theta_e0);
  r.num("initial.v_dc", cfg.v_dc0);
  r.num("initial.v_o", cfg.v_o0);

  std::string speed;
  std::string torque;
  r.text("references.speed_rpm", speed);
  r.text("references.load_torque", torque);
  if (!speed.empty()) cfg.speed_rpm = parse_profile(speed);
  if (!torque.empty()) cfg.load_torque = parse_profile(torque);
  r.num("references.speed_gain", cfg.speed_gain);
  r.num("references.torque_limit", cfg.torque_limit);
  r.num("references.v_dc_ref", cfg.v_dc_ref);

  r.num("pi.k_p", cfg.pi.k_p);
  r.num("pi.k_i", cfg.pi.k_i);
  r.num("pi.clamp", cfg.pi.clamp);

  r.integer("controller.horizon", cfg.controller.n_h);
  r.integer("controller.nk", cfg.controller.n_k);
  r.integer("controller.nl", cfg.controller.n_l);
  r.num("controller.lambda", cfg.controller.lambda);
  r.num("controller.lambda_v", cfg.controller.lambda_v);
  std::string mode;
  r.text("controller.mode", mode);
  if (!mode.empty()) cfg.controller.mode = parse_mode(mode);
  cfg.controller.t_s = cfg.t_s;

  auto as_int = [](const std::string& k, const std::string& v) { return static_cast<int>(to_long(k, v)); };
  r.list("sweep.horizon", cfg.grid.n_h, as_int);
  r.list("sweep.nk", cfg.grid.n_k, as_int);
  r.list("sweep.nl", cfg.grid.n_l, as_int);
  r.list("sweep.lambda", cfg.grid.lambda, to_double);
  r.list("sweep.mode", cfg.grid.mode,
         [](const std::string&, const std::string& v) { return parse_mode(v); });

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace smpc
