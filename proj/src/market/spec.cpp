#include "vof/market/spec.hpp"

#include <numeric>

#include "vof/lp/problem.hpp"

namespace vof::market {
namespace {

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

void require_nonneg(const std::vector<double>& v, const char* name) {
  for (double x : v) {
    if (!(x >= 0.0)) {
      throw lp::MalformedProblem(std::string("market spec: ") + name +
                                 " must be nonnegative");
    }
  }
}

}  // namespace

double MarketSpec::total_gen_cap() const { return sum(gen_caps); }
double MarketSpec::total_up_cap() const { return sum(up_caps); }
double MarketSpec::total_down_cap() const { return sum(down_caps); }

void MarketSpec::validate() const {
  if (gen_caps.size() != n_gen() || gen_ramps.size() != n_gen()) {
    throw lp::MalformedProblem(
        "market spec: generator cost/cap/ramp sizes disagree");
  }
  if (up_caps.size() != n_up() || down_caps.size() != n_down()) {
    throw lp::MalformedProblem(
        "market spec: flexible resource cost/cap sizes disagree");
  }
  if (!commit_costs.empty() && commit_costs.size() != n_gen()) {
    throw lp::MalformedProblem(
        "market spec: commit cost size disagrees with generators");
  }
  if (horizon < 1) {
    throw lp::MalformedProblem("market spec: horizon must be at least 1");
  }
  require_nonneg(gen_costs, "generator costs");
  require_nonneg(gen_caps, "generator caps");
  require_nonneg(gen_ramps, "ramps");
  require_nonneg(up_costs, "up costs");
  require_nonneg(up_caps, "up caps");
  require_nonneg(down_costs, "down utilities");
  require_nonneg(down_caps, "down caps");
  require_nonneg(commit_costs, "commit costs");
  if (!(wind_cap >= 0.0)) {
    throw lp::MalformedProblem("market spec: wind cap must be nonnegative");
  }
}

MarketSpec toy_market() {
  MarketSpec s;
  s.gen_costs = {10.0, 30.0};
  s.gen_caps = {40.0, 60.0};
  s.gen_ramps = {40.0, 60.0};  // never binding at T = 1
  s.up_costs = {100.0};
  s.up_caps = {20.0};
  s.down_costs = {10.0};
  s.down_caps = {20.0};
  s.wind_cap = 40.0;
  s.horizon = 1;
  return s;
}

MarketSpec synth_market() {
  MarketSpec s;
  // Sized against the synthetic history: loads run 50-70 kW, so the cheap
  // 30 kW generator is marginal only when wind is strong and the system
  // price sits at 30 $/kW on a typical hour.
  s.gen_costs = {10.0, 30.0};
  s.gen_caps = {30.0, 60.0};
  s.gen_ramps = {30.0, 60.0};  // slack: hourly swings stay far below caps
  s.up_costs = {100.0, 120.0};
  s.up_caps = {25.0, 25.0};
  s.down_costs = {10.0, 5.0};
  s.down_caps = {25.0, 25.0};
  s.wind_cap = 40.0;
  s.horizon = 24;
  s.commit_costs = {150.0, 100.0};
  return s;
}

MarketSpec toy_uc_market() {
  MarketSpec s;
  s.gen_costs = {10.0, 5.0};
  s.gen_caps = {50.0, 50.0};
  s.gen_ramps = {50.0, 50.0};
  s.up_costs = {100.0};
  s.up_caps = {20.0};
  s.down_costs = {10.0};
  s.down_caps = {20.0};
  s.wind_cap = 40.0;
  s.horizon = 1;
  s.commit_costs = {200.0, 1000.0};
  return s;
}

}  // namespace vof::market
