#pragma once

// Physical parameter set and its flat key=value config format.
//
// Unit convention: every frequency-like input is an ordinary frequency in MHz
// and is multiplied by 2*pi on ingestion; all internal arithmetic is in
// rad/us. Time is in microseconds throughout.

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fsl {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

struct PhysicalParams {
  double Na = 600.0;            // atoms in the ensemble (dimensionless)
  double g_m_MHz = 0.182;       // single-atom microwave coupling
  double g_o_MHz = 0.206;       // single-atom optical coupling
  double Omega1_max_MHz = std::sqrt(600.0) * 0.182;  // peak Rabi, leg 1
  double Omega2_max_MHz = std::sqrt(600.0) * 0.206;  // peak Rabi, leg 2
  double Delta_MHz = 70.5;      // detuning of the microwave leg
  double delta_MHz = 88.6;      // detuning of the optical leg
  double g_MHz = 0.282;         // peak lattice coupling (independent input)
  double kappa_o_MHz = 0.0034;  // optical cavity decay rate
  double kappa_m_MHz = 0.002;   // microwave resonator decay rate
  double Gamma0_MHz = 0.0036;   // superatom spontaneous decay rate
  double T_us = 8.2;            // pump duration
  int N_excitations = 5;        // total excitation number of the working sector

  // rad/us accessors used by all builders and propagators.
  double g_m() const { return kTwoPi * g_m_MHz; }
  double g_o() const { return kTwoPi * g_o_MHz; }
  double Omega1_max() const { return kTwoPi * Omega1_max_MHz; }
  double Omega2_max() const { return kTwoPi * Omega2_max_MHz; }
  double Delta() const { return kTwoPi * Delta_MHz; }
  double delta() const { return kTwoPi * delta_MHz; }
  double g() const { return kTwoPi * g_MHz; }
  double kappa_o() const { return kTwoPi * kappa_o_MHz; }
  double kappa_m() const { return kTwoPi * kappa_m_MHz; }
  double Gamma0() const { return kTwoPi * Gamma0_MHz; }

  // Throws ConfigError when an invariant is violated (negative rates,
  // non-positive duration, Na < 1, N < 0).
  void validate() const;
};

// The exact accepted config keys, in canonical emission order.
const std::vector<std::string>& config_keys();

// Parse "key = value" lines ('#' starts a comment; blank lines ignored).
// Throws ConfigError on malformed lines or unreadable files.
std::map<std::string, std::string> read_kv_file(const std::filesystem::path& path);

// Apply one config entry. Unknown keys are rejected by name; values are
// decimal with optional scientific notation.
void apply_config_key(PhysicalParams& p, const std::string& key, const std::string& value);

// Load a config file on top of defaults (or on top of `base`).
PhysicalParams params_from_file(const std::filesystem::path& path,
                                const PhysicalParams& base = {});

// Canonical key=value rendering with 12 significant digits.
std::string render_config(const PhysicalParams& p);

}  // namespace fsl
