#pragma once

#include <optional>
#include <string_view>

namespace rqbm {

// CODATA 2018 values, SI.
namespace codata {
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double speed_of_light = 299792458.0;      // m / s
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F / m
inline constexpr double fine_structure = 7.2973525693e-3;
}  // namespace codata

/// The closed set of dimensions the workbench converts.
enum class Dimension { Length, Time, Energy, Frequency, Wavenumber, Diffusion };

/// Throws InputError for anything outside the closed set.
Dimension parse_dimension(std::string_view tag);
std::string_view to_string(Dimension d);

/// Compton scales for a particle of a given mass. Every module outside this
/// header works in units where hbar = m = c = 1.
struct UnitScales {
  double mass;        // kg
  double length;      // hbar / (m c)
  double time;        // hbar / (m c^2)
  double energy;      // m c^2
  double frequency;   // m c^2 / hbar
  double wavenumber;  // m c / hbar

  static UnitScales from_constants(double mass, double hbar, double c);
  static UnitScales for_mass(double mass_kg);
  static UnitScales electron() { return for_mass(codata::electron_mass); }

  /// Scale of a composite or base dimension (Diffusion = length^2 / time).
  double of(Dimension d) const;
};

double to_compton(double value, Dimension d, const UnitScales& scales);
double from_compton(double value, Dimension d, const UnitScales& scales);
double to_compton(double value, std::string_view tag, const UnitScales& scales);
double from_compton(double value, std::string_view tag, const UnitScales& scales);

/// Radiation-reaction time e^2 / (6 pi eps0 m c^3) in seconds.
double radiation_reaction_time_si(double mass_kg, double charge_c);

enum class Model { Conservative, Collisional, Radiative, PhaseDiffusion, DAlembertDiffusion };

std::string_view to_string(Model m);
Model parse_model(std::string_view name);
inline bool is_dissipative(Model m) { return m != Model::Conservative; }

/// Which field equation is in play and its single rate constant, in Compton
/// units. Exactly the constant matching `model` is set:
///   Collisional -> gamma, Radiative -> tau,
///   PhaseDiffusion / DAlembertDiffusion -> diffusion, Conservative -> none.
struct ModelParams {
  Model model = Model::Conservative;
  std::optional<double> gamma;
  std::optional<double> tau;
  std::optional<double> diffusion;

  static ModelParams conservative();
  static ModelParams collisional(double gamma);
  static ModelParams radiative(double tau);
  static ModelParams phase_diffusion(double diffusion);
  static ModelParams dalembert_diffusion(double diffusion);
  static ModelParams make(Model model, double rate);

  /// The matching rate constant; 0 for the conservative model.
  double rate() const;
  void validate() const;
};

}  // namespace rqbm
