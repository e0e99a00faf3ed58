#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vof::market {

// Input data that a dispatch instance can never satisfy: thermal capacity
// short of residual load, or a forecast above the load it nets against.
struct InfeasibleByConstruction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Real-time deviation beyond the flexible fleet; carries how much is missing.
struct BalancingInfeasible : std::runtime_error {
  BalancingInfeasible(const std::string& msg, double deficit_kw)
      : std::runtime_error(msg), deficit(deficit_kw) {}
  double deficit;
};

// The dual-side reconstruction of the primal cost missed; a sign or
// orientation bug somewhere in the dual extraction.
struct IdentityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance larger than the dense LP layer is meant to carry.
struct ScaleExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Static description of the market: thermal fleet, flexible resources, wind.
// Loads and forecasts are data, not part of the spec.
struct MarketSpec {
  std::vector<double> gen_costs;   // $/kW per generator
  std::vector<double> gen_caps;    // kW
  std::vector<double> gen_ramps;   // kW per step
  std::vector<double> up_costs;    // $/kW paid for upward balancing
  std::vector<double> up_caps;     // kW
  std::vector<double> down_costs;  // $/kW recovered for downward balancing
  std::vector<double> down_caps;   // kW
  double wind_cap = 0.0;           // kW, forecast output cap
  std::size_t horizon = 24;        // hours per day
  std::vector<double> commit_costs;  // $ start-up per generator, UC only

  std::size_t n_gen() const { return gen_costs.size(); }
  std::size_t n_up() const { return up_costs.size(); }
  std::size_t n_down() const { return down_costs.size(); }

  double total_gen_cap() const;
  double total_up_cap() const;
  double total_down_cap() const;

  // Throws lp::MalformedProblem on size mismatches or negative data.
  void validate() const;
};

// The single-period fixture used throughout the tests: two generators
// (40 kW at 10 $/kW, 60 kW at 30 $/kW), one 20 kW up resource at 100 $/kW,
// one 20 kW down resource at 10 $/kW, 40 kW of wind.
MarketSpec toy_market();

// Two 50 kW generators (10 and 5 $/kW) with start-up costs 200 and 1000 $.
MarketSpec toy_uc_market();

// Day-scale system matched to the synthetic history: 30 + 60 kW generators,
// two up and two down resources of 25 kW each, 40 kW of wind over 24 hours.
MarketSpec synth_market();

}  // namespace vof::market
