#include "fsl/params.hpp"

#include "fsl/csv.hpp"
#include "fsl/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fsl {

void PhysicalParams::validate() const {
  if (Na < 1.0) throw ConfigError("Na must be >= 1");
  if (T_us <= 0.0) throw ConfigError("T_us must be positive");
  if (N_excitations < 0) throw ConfigError("N_excitations must be non-negative");
  const struct {
    const char* name;
    double v;
  } rates[] = {{"g_m_MHz", g_m_MHz},   {"g_o_MHz", g_o_MHz},
               {"Omega1_max_MHz", Omega1_max_MHz}, {"Omega2_max_MHz", Omega2_max_MHz},
               {"Delta_MHz", Delta_MHz}, {"delta_MHz", delta_MHz},
               {"g_MHz", g_MHz},       {"kappa_o_MHz", kappa_o_MHz},
               {"kappa_m_MHz", kappa_m_MHz}, {"Gamma0_MHz", Gamma0_MHz}};
  for (const auto& r : rates)
    if (r.v < 0.0) throw ConfigError(std::string(r.name) + " must be non-negative");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "Na",        "g_m_MHz",     "g_o_MHz",      "Omega1_max_MHz", "Omega2_max_MHz",
      "Delta_MHz", "delta_MHz",   "g_MHz",        "kappa_o_MHz",    "kappa_m_MHz",
      "Gamma0_MHz", "T_us",       "N_excitations"};
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for key '" + key + "': '" + value + "'");
  }
}

}  // namespace

std::map<std::string, std::string> read_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

void apply_config_key(PhysicalParams& p, const std::string& key, const std::string& value) {
  if (key == "Na") p.Na = parse_number(key, value);
  else if (key == "g_m_MHz") p.g_m_MHz = parse_number(key, value);
  else if (key == "g_o_MHz") p.g_o_MHz = parse_number(key, value);
  else if (key == "Omega1_max_MHz") p.Omega1_max_MHz = parse_number(key, value);
  else if (key == "Omega2_max_MHz") p.Omega2_max_MHz = parse_number(key, value);
  else if (key == "Delta_MHz") p.Delta_MHz = parse_number(key, value);
  else if (key == "delta_MHz") p.delta_MHz = parse_number(key, value);
  else if (key == "g_MHz") p.g_MHz = parse_number(key, value);
  else if (key == "kappa_o_MHz") p.kappa_o_MHz = parse_number(key, value);
  else if (key == "kappa_m_MHz") p.kappa_m_MHz = parse_number(key, value);
  else if (key == "Gamma0_MHz") p.Gamma0_MHz = parse_number(key, value);
  else if (key == "T_us") p.T_us = parse_number(key, value);
  else if (key == "N_excitations") {
    const double v = parse_number(key, value);
    const int n = static_cast<int>(v);
    if (static_cast<double>(n) != v)
      throw ConfigError("N_excitations must be an integer, got '" + value + "'");
    p.N_excitations = n;
  } else {
    throw ConfigError("unknown config key: '" + key + "'");
  }
}

PhysicalParams params_from_file(const std::filesystem::path& path, const PhysicalParams& base) {
  PhysicalParams p = base;
  for (const auto& [key, value] : read_kv_file(path)) apply_config_key(p, key, value);
  p.validate();
  return p;
}

std::string render_config(const PhysicalParams& p) {
  std::ostringstream out;
  out << "Na=" << io::g12(p.Na) << '\n'
      << "g_m_MHz=" << io::g12(p.g_m_MHz) << '\n'
      << "g_o_MHz=" << io::g12(p.g_o_MHz) << '\n'
      << "Omega1_max_MHz=" << io::g12(p.Omega1_max_MHz) << '\n'
      << "Omega2_max_MHz=" << io::g12(p.Omega2_max_MHz) << '\n'
      << "Delta_MHz=" << io::g12(p.Delta_MHz) << '\n'
      << "delta_MHz=" << io::g12(p.delta_MHz) << '\n'
      << "g_MHz=" << io::g12(p.g_MHz) << '\n'
      << "kappa_o_MHz=" << io::g12(p.kappa_o_MHz) << '\n'
      << "kappa_m_MHz=" << io::g12(p.kappa_m_MHz) << '\n'
      << "Gamma0_MHz=" << io::g12(p.Gamma0_MHz) << '\n'
      << "T_us=" << io::g12(p.T_us) << '\n'
      << "N_excitations=" << p.N_excitations << '\n';
  return out.str();
}

}  // namespace fsl
