#include <doctest.h>

#include <random>

#include "rqbm/errors.hpp"
#include "rqbm/units.hpp"

using namespace rqbm;

TEST_CASE("compton scales are mutually consistent") {
  const auto s = UnitScales::electron();
  CHECK(s.length == doctest::Approx(codata::speed_of_light * s.time).epsilon(1e-15));
  CHECK(s.energy * s.time == doctest::Approx(codata::hbar).epsilon(1e-15));
  CHECK(s.wavenumber * s.length == doctest::Approx(1.0).epsilon(1e-15));
  // Reduced Compton wavelength of the electron, about 3.8616e-13 m.
  CHECK(s.length == doctest::Approx(3.8615926796e-13).epsilon(1e-9));
}

TEST_CASE("rest energy and zitterbewegung frequency") {
  const auto s = UnitScales::electron();
  const double mc2 = codata::electron_mass * codata::speed_of_light * codata::speed_of_light;
  CHECK(to_compton(mc2, "energy", s) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(to_compton(2.0 * mc2 / codata::hbar, "frequency", s) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(from_compton(1.0, Dimension::Energy, s) == doctest::Approx(mc2).epsilon(1e-15));
  CHECK(from_compton(2.0, "frequency", s) ==
        doctest::Approx(2.0 * mc2 / codata::hbar).epsilon(1e-15));
}

TEST_CASE("radiation reaction time of the electron") {
  const double tau_si =
      radiation_reaction_time_si(codata::electron_mass, codata::elementary_charge);
  CHECK(tau_si == doctest::Approx(6.266e-24).epsilon(1e-3));
  // e^2 / (4 pi eps0 hbar c) is the fine-structure constant, so in Compton
  // units tau = 2 alpha / 3.
  const double tau = to_compton(tau_si, "time", UnitScales::electron());
  CHECK(tau == doctest::Approx(2.0 * codata::fine_structure / 3.0).epsilon(1e-8));
}

TEST_CASE("round trips are the identity") {
  const auto s = UnitScales::electron();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(-30.0, 30.0);
  for (auto d : {Dimension::Length, Dimension::Time, Dimension::Energy, Dimension::Frequency,
                 Dimension::Wavenumber, Dimension::Diffusion}) {
    for (int i = 0; i < 100; ++i) {
      const double x = std::pow(10.0, mag(rng));
      CHECK(from_compton(to_compton(x, d, s), d, s) == doctest::Approx(x).epsilon(1e-14));
      CHECK(to_compton(from_compton(x, d, s), d, s) == doctest::Approx(x).epsilon(1e-14));
    }
  }
}

TEST_CASE("diffusion scale is length squared over time") {
  const auto s = UnitScales::electron();
  CHECK(s.of(Dimension::Diffusion) ==
        doctest::Approx(codata::hbar / codata::electron_mass).epsilon(1e-14));
}

TEST_CASE("unknown tags and models are rejected") {
  const auto s = UnitScales::electron();
  CHECK_THROWS_AS(to_compton(1.0, "mass", s), InputError);
  CHECK_THROWS_AS(from_compton(1.0, "Energy", s), InputError);
  CHECK_THROWS_AS(parse_model("telegraph"), InputError);
  CHECK_THROWS_AS(UnitScales::from_constants(-1.0, 1.0, 1.0), InputError);
  CHECK(parse_model("dalembert-diffusion") == Model::DAlembertDiffusion);
  CHECK(to_string(Model::PhaseDiffusion) == "phase-diffusion");
}

TEST_CASE("model parameters carry exactly their own rate") {
  CHECK(ModelParams::collisional(2.0).rate() == 2.0);
  CHECK(ModelParams::conservative().rate() == 0.0);
  CHECK_THROWS_AS(ModelParams::radiative(-1.0), InputError);

  ModelParams p = ModelParams::radiative(1.0);
  p.gamma = 1.0;
  CHECK_THROWS_AS(p.validate(), InputError);

  ModelParams q;
  q.model = Model::Collisional;
  CHECK_THROWS_AS(q.validate(), InputError);

  ModelParams c = ModelParams::conservative();
  c.diffusion = 0.5;
  CHECK_THROWS_AS(c.validate(), InputError);
  CHECK(ModelParams::make(Model::PhaseDiffusion, 0.5).diffusion == 0.5);
}
