#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "oracle_market.hpp"
#include "vof/core/rng.hpp"
#include "vof/lp/branch_and_bound.hpp"
#include "vof/lp/simplex.hpp"
#include "vof/market/dispatch.hpp"
#include "vof/market/stochastic.hpp"
#include "vof/market/unit_commitment.hpp"

using namespace vof::market;
using vof::Matrix;
using vof::Rng;

namespace {

// A fatter market for property tests: two ups, two downs, three generators.
MarketSpec wide_market() {
  MarketSpec s;
  s.gen_costs = {10.0, 30.0, 45.0};
  s.gen_caps = {40.0, 60.0, 30.0};
  s.gen_ramps = {15.0, 25.0, 30.0};
  s.up_costs = {100.0, 120.0};
  s.up_caps = {25.0, 25.0};
  s.down_costs = {10.0, 5.0};
  s.down_caps = {25.0, 25.0};
  s.wind_cap = 40.0;
  s.horizon = 1;
  return s;
}

}  // namespace

TEST_CASE("day-ahead fixture dispatch, price and capacity rent") {
  const MarketSpec spec = toy_market();
  auto r = solve_day_ahead(spec, {10.0}, {56.0});
  CHECK(r.cost == doctest::Approx(580.0));
  CHECK(r.schedule(0, 0) == doctest::Approx(40.0));
  CHECK(r.schedule(0, 1) == doctest::Approx(6.0));
  CHECK(r.lambda[0] == doctest::Approx(30.0));
  CHECK(r.cap_duals(0, 0) == doctest::Approx(20.0));
  CHECK(r.cap_duals(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("forecast covering the whole load idles the fleet") {
  const MarketSpec spec = toy_market();
  auto r = solve_day_ahead(spec, {30.0}, {30.0});
  CHECK(r.cost == doctest::Approx(0.0));
  CHECK(r.schedule(0, 0) == doctest::Approx(0.0));
  // Degenerate corner: the price is basis-dependent but bracketed.
  CHECK(r.lambda[0] >= -1e-9);
  CHECK(r.lambda[0] <= 10.0 + 1e-9);
}

TEST_CASE("ramp limits can make an hourly-feasible day infeasible") {
  MarketSpec spec = toy_market();
  spec.gen_ramps = {1.0, 1.0};
  spec.horizon = 2;
  // Each hour fits under total capacity, but the 14 kW residual jump cannot
  // be delivered with 2 kW of total ramping.
  CHECK_THROWS_AS(solve_day_ahead(spec, {10.0, 10.0}, {56.0, 70.0}),
                  InfeasibleByConstruction);
}

TEST_CASE("day-ahead input screens fire with the right error classes") {
  const MarketSpec spec = toy_market();
  CHECK_THROWS_AS(build_day_ahead(spec, {20.0}, {15.0}),
                  InfeasibleByConstruction);  // forecast above load
  CHECK_THROWS_AS(build_day_ahead(spec, {0.0}, {150.0}),
                  InfeasibleByConstruction);  // load above the fleet
  CHECK_THROWS_AS(build_day_ahead(spec, {45.0}, {56.0}),
                  vof::lp::MalformedProblem);  // forecast above wind cap
  CHECK_THROWS_AS(build_day_ahead(spec, {0.0}, {-1.0}),
                  vof::lp::MalformedProblem);  // nonpositive load
  CHECK_THROWS_AS(build_day_ahead(spec, {0.0}, {56.0, 60.0}),
                  vof::lp::MalformedProblem);  // length != horizon
}

TEST_CASE("real-time shortage and surplus settle at the marginal resource") {
  const MarketSpec spec = toy_market();
  auto shortage = solve_real_time(spec, 10.0, 8.0);
  CHECK(shortage.z_up[0] == doctest::Approx(2.0));
  CHECK(shortage.cost == doctest::Approx(200.0));
  CHECK(shortage.nu == doctest::Approx(100.0));

  auto surplus = solve_real_time(spec, 10.0, 13.0);
  CHECK(surplus.z_down[0] == doctest::Approx(3.0));
  CHECK(surplus.cost == doctest::Approx(-30.0));
  CHECK(surplus.nu == doctest::Approx(10.0));

  auto balanced = solve_real_time(spec, 10.0, 10.0);
  CHECK(balanced.cost == doctest::Approx(0.0));
  CHECK(balanced.nu >= 10.0 - 1e-9);
  CHECK(balanced.nu <= 100.0 + 1e-9);
}

TEST_CASE("deviation beyond the flexible fleet reports its deficit") {
  const MarketSpec spec = toy_market();
  try {
    solve_real_time(spec, 35.0, 10.0);
    FAIL("expected BalancingInfeasible");
  } catch (const BalancingInfeasible& e) {
    CHECK(e.deficit == doctest::Approx(5.0));
  }
}

TEST_CASE("real-time price steps down the merged price ladder") {
  const MarketSpec spec = wide_market();
  const double y_tilde = 60.0;
  std::vector<double> last_nu;
  // Strictly nonzero deviations, clear of every capacity knee.
  for (double y : {10.3, 22.7, 40.1, 52.6, 70.4, 90.2, 100.7}) {
    auto r = solve_real_time(spec, y_tilde, y);
    if (!last_nu.empty()) CHECK(r.nu <= last_nu.back() + 1e-9);
    last_nu.push_back(r.nu);
    bool on_ladder = false;
    for (double p : {120.0, 100.0, 10.0, 5.0}) {
      if (std::fabs(r.nu - p) < 1e-7) on_ladder = true;
    }
    CHECK(on_ladder);
  }
}

TEST_CASE("dual decomposition reproduces the fixture cost split") {
  const MarketSpec spec = toy_market();
  const std::vector<double> y_tilde = {10.0}, load = {56.0};

  auto da = solve_day_ahead(spec, y_tilde, load);
  {
    const std::vector<double> y = {8.0};
    std::vector<RealTimeResult> rt = {solve_real_time(spec, 10.0, 8.0)};
    auto b = dual_decomposition(da, rt, y_tilde, y, spec, load);
    CHECK(b.psi_day_ahead == doctest::Approx(880.0));
    CHECK(b.psi_real_time[0] == doctest::Approx(0.0));
    const double parts = -b.lambda[0] * 10.0 - b.nu[0] * (8.0 - 10.0) +
                         b.psi_day_ahead + b.psi_real_time[0];
    CHECK(parts == doctest::Approx(780.0));
    CHECK(parts == doctest::Approx(da.cost + rt[0].cost));
  }
  {
    const std::vector<double> y = {13.0};
    std::vector<RealTimeResult> rt = {solve_real_time(spec, 10.0, 13.0)};
    auto b = dual_decomposition(da, rt, y_tilde, y, spec, load);
    const double parts = -b.lambda[0] * 10.0 - b.nu[0] * (13.0 - 10.0) +
                         b.psi_day_ahead + b.psi_real_time[0];
    CHECK(parts == doctest::Approx(550.0));
  }
  {
    // Zero deviation: the nu term vanishes no matter which dual came back.
    const std::vector<double> y = {10.0};
    std::vector<RealTimeResult> rt = {solve_real_time(spec, 10.0, 10.0)};
    auto b = dual_decomposition(da, rt, y_tilde, y, spec, load);
    const double parts = -b.lambda[0] * 10.0 + b.psi_day_ahead;
    CHECK(parts == doctest::Approx(580.0));
  }
}

TEST_CASE("cost reconstruction holds across random multi-hour days") {
  Rng rng(404);
  for (int trial = 0; trial < 60; ++trial) {
    MarketSpec spec = wide_market();
    spec.horizon = 4;
    std::vector<double> y_tilde(4), y(4), load(4);
    for (std::size_t t = 0; t < 4; ++t) {
      load[t] = rng.uniform(45.0, 90.0);
      y_tilde[t] = rng.uniform(0.0, 35.0);
      y[t] = rng.uniform(0.0, 40.0);
    }
    DayAheadResult da;
    try {
      da = solve_day_ahead(spec, y_tilde, load);
    } catch (const InfeasibleByConstruction&) {
      continue;  // ramp-bound day; not the property under test
    }
    std::vector<RealTimeResult> rt;
    bool balancing_ok = true;
    for (std::size_t t = 0; t < 4; ++t) {
      try {
        rt.push_back(solve_real_time(spec, y_tilde[t], y[t]));
      } catch (const BalancingInfeasible&) {
        balancing_ok = false;
        break;
      }
    }
    if (!balancing_ok) continue;
    CAPTURE(trial);
    // Throws IdentityViolation on any orientation bug.
    auto b = dual_decomposition(da, rt, y_tilde, y, spec, load);
    CHECK(b.lambda.size() == 4);
  }
}

TEST_CASE("duals equal central differences of the dispatch optima") {
  Rng rng(515);
  int checked_da = 0, checked_rt = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const MarketSpec spec = wide_market();
    const double load = rng.uniform(50.0, 95.0);
    const double yt = rng.uniform(2.0, 35.0);
    const double h = 1e-5;

    try {
      auto lo = solve_day_ahead(spec, {yt - h}, {load});
      auto hi = solve_day_ahead(spec, {yt + h}, {load});
      if (std::fabs(lo.lambda[0] - hi.lambda[0]) < 1e-7) {
        auto mid = solve_day_ahead(spec, {yt}, {load});
        const double fd = (hi.cost - lo.cost) / (2.0 * h);
        CHECK(fd == doctest::Approx(-mid.lambda[0]).epsilon(1e-6).scale(1.0));
        ++checked_da;
      }
    } catch (const InfeasibleByConstruction&) {
    }

    const double y = rng.uniform(0.0, 60.0);
    try {
      auto lo = solve_real_time(spec, yt - h, y);
      auto hi = solve_real_time(spec, yt + h, y);
      if (std::fabs(lo.nu - hi.nu) < 1e-7) {
        auto mid = solve_real_time(spec, yt, y);
        const double fd = (hi.cost - lo.cost) / (2.0 * h);
        CHECK(fd == doctest::Approx(mid.nu).epsilon(1e-6).scale(1.0));
        ++checked_rt;
      }
    } catch (const BalancingInfeasible&) {
    }
  }
  CHECK(checked_da >= 10);
  CHECK(checked_rt >= 10);
}

TEST_CASE("two-scenario commitment lands on the cheap-shortfall breakpoint") {
  const MarketSpec spec = toy_market();
  Matrix scen(2, 1);
  scen(0, 0) = 8.0;
  scen(1, 0) = 12.0;
  auto r = solve_stochastic(spec, {56.0}, scen, {0.5, 0.5});
  CHECK(r.y_tilde[0] == doctest::Approx(8.0));
  CHECK(r.expected_cost == doctest::Approx(620.0));

  // The grid oracle agrees on both the location and the value.
  auto ref = vof::testing::stochastic_grid_oracle(spec, 56.0, {8.0, 12.0},
                                                  {0.5, 0.5});
  CHECK(ref.y_tilde == doctest::Approx(8.0));
  CHECK(ref.cost == doctest::Approx(620.0));
}

TEST_CASE("cheap upward energy moves the commitment to the high scenario") {
  MarketSpec spec = toy_market();
  spec.up_costs = {20.0};
  Matrix scen(2, 1);
  scen(0, 0) = 8.0;
  scen(1, 0) = 12.0;
  auto ref = vof::testing::stochastic_grid_oracle(spec, 56.0, {8.0, 12.0},
                                                  {0.5, 0.5});
  auto r = solve_stochastic(spec, {56.0}, scen, {0.5, 0.5});
  CHECK(r.expected_cost == doctest::Approx(ref.cost).epsilon(1e-9));
  CHECK(r.y_tilde[0] == doctest::Approx(ref.y_tilde).epsilon(1e-6));
  // With 20 $/kW shortages the slope nu - lambda stays at 20 - 30 < 0 even
  // past both scenarios; it only turns positive once the residual load drops
  // to the cheap generator's capacity (lambda 30 -> 10) at ytilde = 16.
  CHECK(r.y_tilde[0] == doctest::Approx(16.0));
  CHECK(r.expected_cost == doctest::Approx(520.0));
}

TEST_CASE("single-scenario program collapses to perfect foresight") {
  const MarketSpec spec = toy_market();
  Matrix scen(1, 1);
  scen(0, 0) = 17.0;
  auto r = solve_stochastic(spec, {56.0}, scen, {1.0});
  auto da = solve_day_ahead(spec, {17.0}, {56.0});
  CHECK(r.expected_cost == doctest::Approx(da.cost));
  CHECK(r.y_tilde[0] == doctest::Approx(17.0));
}

TEST_CASE("stochastic objective is a lower envelope over fixed commitments") {
  Rng rng(616);
  const MarketSpec spec = wide_market();
  const std::vector<double> load = {70.0};
  Matrix scen(5, 1);
  std::vector<double> probs(5, 0.2), scen_flat;
  for (std::size_t s = 0; s < 5; ++s) {
    scen(s, 0) = rng.uniform(5.0, 38.0);
    scen_flat.push_back(scen(s, 0));
  }
  auto opt = solve_stochastic(spec, load, scen, probs);
  for (int k = 0; k < 20; ++k) {
    const double yt = rng.uniform(0.0, 38.0);
    double expect = solve_day_ahead(spec, {yt}, load).cost;
    for (std::size_t s = 0; s < 5; ++s) {
      expect += probs[s] * solve_real_time(spec, yt, scen(s, 0)).cost;
    }
    CHECK(opt.expected_cost <= expect + 1e-7);
  }
  // And matches the closed-form scan.
  auto ref = vof::testing::stochastic_grid_oracle(spec, 70.0, scen_flat, probs);
  CHECK(opt.expected_cost == doctest::Approx(ref.cost).epsilon(1e-6));
}

TEST_CASE("oversized scenario sets are rejected up front") {
  MarketSpec spec = toy_market();
  spec.horizon = 24;
  Matrix scen(200, 24);
  std::vector<double> probs(200, 1.0 / 200.0);
  std::vector<double> load(24, 56.0);
  CHECK_THROWS_AS(build_stochastic(spec, load, scen, probs), ScaleExceeded);
}

TEST_CASE("commitment fixture: integer optimum and its relaxation") {
  const MarketSpec spec = toy_uc_market();
  auto uc = build_uc(spec, {0.0}, {30.0});
  auto m = vof::lp::solve_milp(uc.lp, uc.binaries);
  REQUIRE(m.status == vof::lp::SolveStatus::Optimal);
  CHECK(m.incumbent.objective == doctest::Approx(500.0));
  CHECK(m.incumbent.x[uc.u_offset + 0] == doctest::Approx(1.0));
  CHECK(m.incumbent.x[uc.u_offset + 1] == doctest::Approx(0.0));

  auto relaxed = vof::lp::solve_lp(build_relaxed_uc(spec, {0.0}, {30.0}));
  CHECK(relaxed.objective == doctest::Approx(420.0));
  CHECK(relaxed.objective <= m.incumbent.objective);
}

TEST_CASE("zero start-up cost makes the relaxation match plain dispatch") {
  MarketSpec spec = toy_uc_market();
  spec.commit_costs = {0.0, 0.0};
  auto relaxed = vof::lp::solve_lp(build_relaxed_uc(spec, {0.0}, {30.0}));
  auto plain = solve_day_ahead(spec, {0.0}, {30.0});
  CHECK(relaxed.objective == doctest::Approx(plain.cost));
}

TEST_CASE("full wind cover commits nothing") {
  const MarketSpec spec = toy_uc_market();
  auto uc = build_uc(spec, {30.0}, {30.0});
  auto m = vof::lp::solve_milp(uc.lp, uc.binaries);
  REQUIRE(m.status == vof::lp::SolveStatus::Optimal);
  CHECK(m.incumbent.objective == doctest::Approx(0.0));
}

TEST_CASE("branch and bound matches commitment-pattern enumeration") {
  Rng rng(717);
  for (int trial = 0; trial < 8; ++trial) {
    MarketSpec spec = toy_uc_market();
    spec.horizon = 3;
    spec.gen_ramps = {20.0, 25.0};
    std::vector<double> load(3), yt(3);
    for (std::size_t t = 0; t < 3; ++t) {
      load[t] = rng.uniform(20.0, 70.0);
      yt[t] = rng.uniform(0.0, 15.0);
    }
    std::optional<UcProblem> built;
    try {
      built.emplace(build_uc(spec, yt, load));
    } catch (const InfeasibleByConstruction&) {
      continue;
    }
    UcProblem& uc = *built;
    // Exhaustive oracle: fix every on/off pattern and solve the rest as LPs.
    const std::size_t nb = uc.binaries.size();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << nb); ++mask) {
      vof::lp::LinearProgram fixed = uc.lp;
      for (std::size_t k = 0; k < nb; ++k) {
        const double v = (mask >> k) & 1 ? 1.0 : 0.0;
        fixed.set_bounds(uc.binaries[k], v, v);
      }
      auto sol = vof::lp::solve_lp(fixed);
      if (sol.status == vof::lp::SolveStatus::Optimal) {
        best = std::min(best, sol.objective);
      }
    }
    auto m = vof::lp::solve_milp(uc.lp, uc.binaries);
    CAPTURE(trial);
    if (std::isinf(best)) {
      CHECK(m.status == vof::lp::SolveStatus::Infeasible);
    } else {
      REQUIRE(m.status == vof::lp::SolveStatus::Optimal);
      CHECK(m.incumbent.objective == doctest::Approx(best).epsilon(1e-8));
      // The relaxation can only undercut the integer optimum.
      CHECK(m.relaxation_bound <= m.incumbent.objective + 1e-8);
    }
  }
}
