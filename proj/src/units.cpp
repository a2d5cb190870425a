#include "rqbm/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rqbm/errors.hpp"

namespace rqbm {

Dimension parse_dimension(std::string_view tag) {
  if (tag == "length") return Dimension::Length;
  if (tag == "time") return Dimension::Time;
  if (tag == "energy") return Dimension::Energy;
  if (tag == "frequency") return Dimension::Frequency;
  if (tag == "wavenumber") return Dimension::Wavenumber;
  if (tag == "diffusion") return Dimension::Diffusion;
  throw InputError("unknown dimension tag '" + std::string(tag) + "'");
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Length: return "length";
    case Dimension::Time: return "time";
    case Dimension::Energy: return "energy";
    case Dimension::Frequency: return "frequency";
    case Dimension::Wavenumber: return "wavenumber";
    case Dimension::Diffusion: return "diffusion";
  }
  return "?";
}

UnitScales UnitScales::from_constants(double mass, double hbar, double c) {
  if (!(mass > 0.0) || !(hbar > 0.0) || !(c > 0.0) || !std::isfinite(mass) ||
      !std::isfinite(hbar) || !std::isfinite(c)) {
    throw InputError("unit scales require finite positive mass, hbar and c");
  }
  UnitScales s{};
  s.mass = mass;
  s.length = hbar / (mass * c);
  s.time = hbar / (mass * c * c);
  s.energy = mass * c * c;
  s.frequency = mass * c * c / hbar;
  s.wavenumber = mass * c / hbar;
  return s;
}

UnitScales UnitScales::for_mass(double mass_kg) {
  return from_constants(mass_kg, codata::hbar, codata::speed_of_light);
}

double UnitScales::of(Dimension d) const {
  switch (d) {
    case Dimension::Length: return length;
    case Dimension::Time: return time;
    case Dimension::Energy: return energy;
    case Dimension::Frequency: return frequency;
    case Dimension::Wavenumber: return wavenumber;
    case Dimension::Diffusion: return length * length / time;
  }
  throw InputError("unknown dimension");
}

double to_compton(double value, Dimension d, const UnitScales& scales) {
  return value / scales.of(d);
}

double from_compton(double value, Dimension d, const UnitScales& scales) {
  return value * scales.of(d);
}

double to_compton(double value, std::string_view tag, const UnitScales& scales) {
  return to_compton(value, parse_dimension(tag), scales);
}

double from_compton(double value, std::string_view tag, const UnitScales& scales) {
  return from_compton(value, parse_dimension(tag), scales);
}

double radiation_reaction_time_si(double mass_kg, double charge_c) {
  const double c = codata::speed_of_light;
  return charge_c * charge_c /
         (6.0 * std::numbers::pi * codata::vacuum_permittivity * mass_kg * c * c * c);
}

std::string_view to_string(Model m) {
  switch (m) {
    case Model::Conservative: return "conservative";
    case Model::Collisional: return "collisional";
    case Model::Radiative: return "radiative";
    case Model::PhaseDiffusion: return "phase-diffusion";
    case Model::DAlembertDiffusion: return "dalembert-diffusion";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  if (name == "conservative") return Model::Conservative;
  if (name == "collisional") return Model::Collisional;
  if (name == "radiative") return Model::Radiative;
  if (name == "phase-diffusion") return Model::PhaseDiffusion;
  if (name == "dalembert-diffusion") return Model::DAlembertDiffusion;
  throw InputError("unknown model '" + std::string(name) +
                   "' (expected conservative, collisional, radiative, "
                   "phase-diffusion or dalembert-diffusion)");
}

ModelParams ModelParams::conservative() { return {}; }

ModelParams ModelParams::collisional(double gamma) {
  ModelParams p{Model::Collisional, gamma, {}, {}};
  p.validate();
  return p;
}

ModelParams ModelParams::radiative(double tau) {
  ModelParams p{Model::Radiative, {}, tau, {}};
  p.validate();
  return p;
}

ModelParams ModelParams::phase_diffusion(double diffusion) {
  ModelParams p{Model::PhaseDiffusion, {}, {}, diffusion};
  p.validate();
  return p;
}

ModelParams ModelParams::dalembert_diffusion(double diffusion) {
  ModelParams p{Model::DAlembertDiffusion, {}, {}, diffusion};
  p.validate();
  return p;
}

ModelParams ModelParams::make(Model model, double rate) {
  switch (model) {
    case Model::Conservative: return conservative();
    case Model::Collisional: return collisional(rate);
    case Model::Radiative: return radiative(rate);
    case Model::PhaseDiffusion: return phase_diffusion(rate);
    case Model::DAlembertDiffusion: return dalembert_diffusion(rate);
  }
  throw InputError("unknown model");
}

double ModelParams::rate() const {
  switch (model) {
    case Model::Conservative: return 0.0;
    case Model::Collisional: return gamma.value_or(0.0);
    case Model::Radiative: return tau.value_or(0.0);
    case Model::PhaseDiffusion:
    case Model::DAlembertDiffusion: return diffusion.value_or(0.0);
  }
  return 0.0;
}

namespace {

void check_rate(const std::optional<double>& value, bool expected, const char* name,
                Model model) {
  const std::string model_name(to_string(model));
  if (expected && !value) {
    throw InputError(std::string(name) + " is required for the " + model_name + " model");
  }
  if (!expected && value) {
    throw InputError(std::string(name) + " is not a parameter of the " + model_name + " model");
  }
  if (value && (!std::isfinite(*value) || *value < 0.0)) {
    throw InputError(std::string(name) + " must be finite and >= 0");
  }
}

}  // namespace

void ModelParams::validate() const {
  check_rate(gamma, model == Model::Collisional, "gamma", model);
  check_rate(tau, model == Model::Radiative, "tau", model);
  check_rate(diffusion,
             model == Model::PhaseDiffusion || model == Model::DAlembertDiffusion,
             "diffusion", model);
}

}  // namespace rqbm
