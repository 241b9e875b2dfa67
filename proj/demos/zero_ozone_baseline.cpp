// Zero-ozone baseline: without ozone the only route to a decrement is the
// additive term nu1, so the simulated risk can be checked against the closed
// form. Prints both for a few bounds.

#include <cstdio>

#include "ozrisk/ozrisk.hpp"

int main() {
  using namespace ozrisk;

  SimulationSetup setup;
  setup.er.variant = ErVariant::MSS2012;
  setup.er.beta1 = 10.42;
  setup.er.beta2 = -0.263;
  setup.er.beta3 = 0.0141;
  setup.er.beta4 = 1.40;
  setup.er.beta5 = 0.0079;
  setup.er.beta6 = 0.60;
  setup.er.sigma_u = 0.96;
  setup.er.sigma_nu1 = 4.13;
  setup.er.age_mean = 23.8;
  setup.scenario = zero_ozone_scenario(setup.season);
  setup.n_persons = 10000;
  setup.master_seed = 1;

  std::printf("bound_nu1  simulated%%  closed-form%%\n");
  for (double b : {2.0, 2.5, 3.0, 4.0, kUnbounded}) {
    setup.variability = {2.0, b, 2.0, Redraw::Daily};
    const auto out = run_simulation(setup);
    const auto risk = aggregate_risk(out.results, RiskQuery{});
    std::printf("%-9g  %-10.2f  %.2f\n", b, risk.percent_of_population,
                oracle::zero_ozone_risk(10.0, setup.er.sigma_nu1, b, setup.season.n_days()));
  }
}
