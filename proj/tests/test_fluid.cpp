#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "peerturbo/fluid.hpp"
#include "peerturbo/metrics.hpp"

using namespace peerturbo;
using fluid::FluidParams;
using fluid::Regime;

namespace {

FluidParams fig2(Regime regime = Regime::no_turbo) {
  FluidParams p;
  p.m = 1300;
  p.k = 32;
  p.alpha = 50;
  p.p1 = 0.9;
  p.p2 = 0.9;
  p.regime = regime;
  return p;
}

// Arbitrary valid survival state: F_0 = 1, non-increasing, in [0, 1].
SurvivalState random_state(std::mt19937_64& gen, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SurvivalState s{0, std::vector<double>(k + 1)};
  s.F[0] = 1.0;
  for (std::size_t i = 1; i <= k; ++i) s.F[i] = s.F[i - 1] * u(gen);
  if (u(gen) < 0.3) {
    // saturated prefix
    const std::size_t ones = std::uniform_int_distribution<std::size_t>(0, k)(gen);
    for (std::size_t i = 0; i <= ones; ++i) s.F[i] = 1.0;
  }
  return s;
}

FluidParams random_params(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FluidParams p;
  p.m = std::uniform_int_distribution<std::size_t>(1, 3000)(gen);
  p.k = std::uniform_int_distribution<std::size_t>(1, 40)(gen);
  p.alpha = 0.1 + 800 * u(gen);
  p.p1 = u(gen);
  p.p2 = u(gen);
  return p;
}

}  // namespace

TEST_CASE("init state") {
  for (std::size_t k : {1u, 2u, 32u}) {
    auto p = fig2();
    p.k = k;
    const auto s = fluid::init_state(p);
    CHECK(s.step == 0);
    REQUIRE(s.F.size() == k + 1);
    CHECK(s.F[0] == 1.0);
    for (std::size_t i = 1; i <= k; ++i) CHECK(s.F[i] == 0.0);
    CHECK_FALSE(check_survival_state(s));
  }
}

TEST_CASE("first source-only step at the heatmap parameters") {
  const auto p = fig2();
  const auto s1 = fluid::step_no_turbo(fluid::init_state(p), p);
  CHECK(s1.step == 1);
  CHECK(std::abs(s1.F[1] - 45.0 / 1300.0) < 1e-12);
  for (std::size_t i = 2; i <= p.k; ++i) CHECK(s1.F[i] == 0.0);

  const auto t1 = fluid::step_peer_turbo(fluid::init_state(p), p);
  CHECK(t1.F == s1.F);
}

TEST_CASE("zero source probability leaves the state unchanged") {
  auto p = fig2();
  p.p1 = 0.0;
  std::mt19937_64 gen(1);
  const auto s = random_state(gen, p.k);
  const auto next = fluid::step_no_turbo(s, p);
  CHECK(next.F == s.F);
  CHECK(next.step == s.step + 1);
}

TEST_CASE("clamped source coefficient gives a deterministic cascade") {
  auto p = fig2();
  p.m = 10;  // p1 * alpha / m = 4.5, clamped to 1
  CHECK(p.source_coefficient() == 1.0);
  const auto traj = fluid::run(p, 40);
  for (std::size_t s = 0; s <= 40; ++s) {
    for (std::size_t i = 0; i <= p.k; ++i) {
      REQUIRE(traj[s].F[i] == (i <= s ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("p2 = 0 reduces peer-turbo to source-only bitwise") {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 300; ++t) {
    auto p = random_params(gen);
    p.p2 = 0.0;
    const auto s = random_state(gen, p.k);
    REQUIRE(fluid::step_peer_turbo(s, p).F == fluid::step_no_turbo(s, p).F);
  }
  auto p = fig2(Regime::peer_turbo);
  p.p2 = 0.0;
  auto q = p;
  q.regime = Regime::no_turbo;
  const auto a = fluid::run(p, 500);
  const auto b = fluid::run(q, 500);
  for (std::size_t s = 0; s <= 500; ++s) REQUIRE(a[s].F == b[s].F);
}

TEST_CASE("step properties from random valid states") {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 2000; ++t) {
    const auto p = random_params(gen);
    const auto s = random_state(gen, p.k);
    const auto a = fluid::step_no_turbo(s, p);
    const auto b = fluid::step_peer_turbo(s, p);
    REQUIRE_FALSE(check_survival_state(a));
    REQUIRE_FALSE(check_survival_state(b));
    for (std::size_t i = 0; i <= p.k; ++i) {
      REQUIRE(a.F[i] >= s.F[i]);
      REQUIRE(b.F[i] >= s.F[i]);
      REQUIRE(b.F[i] >= a.F[i]);
    }
  }
}

TEST_CASE("trajectory properties over random parameters") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 60; ++t) {
    auto p = random_params(gen);
    auto q = p;
    p.regime = Regime::no_turbo;
    q.regime = Regime::peer_turbo;
    const auto a = fluid::run(p, 300);
    const auto b = fluid::run(q, 300);
    REQUIRE(a.size() == 301);
    for (std::size_t s = 0; s <= 300; ++s) {
      REQUIRE(a[s].step == s);
      REQUIRE_FALSE(check_survival_state(a[s]));
      REQUIRE_FALSE(check_survival_state(b[s]));
      for (std::size_t i = 0; i <= p.k; ++i) {
        REQUIRE(b[s].F[i] >= a[s].F[i]);
        if (s > 0) {
          REQUIRE(a[s].F[i] >= a[s - 1].F[i]);
          REQUIRE(b[s].F[i] >= b[s - 1].F[i]);
        }
      }
    }
  }
}

TEST_CASE("run with zero horizon returns only the initial state") {
  const auto traj = fluid::run(fig2(), 0);
  REQUIRE(traj.size() == 1);
  CHECK(traj[0].F == fluid::init_state(fig2()).F);
}

TEST_CASE("source-only quorum at the heatmap parameters takes more than 800 rounds") {
  const auto traj = fluid::run(fig2(), 1500);
  const auto q = metrics::quorum_time(traj, 32, 0.8);
  REQUIRE(q.reached());
  CHECK(*q.steps > 800);
}

TEST_CASE("transition sharpens with peer exchange") {
  const auto a = Surface::from_trajectory(fluid::run(fig2(Regime::no_turbo), 1500));
  const auto b = Surface::from_trajectory(fluid::run(fig2(Regime::peer_turbo), 1500));
  const auto wa = metrics::transition_width(a, 32, 0.1, 0.9);
  const auto wb = metrics::transition_width(b, 32, 0.1, 0.9);
  const auto wa1 = metrics::transition_width(a, 1, 0.1, 0.9);
  REQUIRE(wa);
  REQUIRE(wb);
  REQUIRE(wa1);
  CHECK(*wa > *wb);
  CHECK(*wa > *wa1);
}

TEST_CASE("parameter validation names the field") {
  auto bad = [](auto mutate) {
    auto p = fig2();
    mutate(p);
    return p;
  };
  CHECK_THROWS_WITH(bad([](FluidParams& p) { p.m = 0; }).validate(), doctest::Contains("m"));
  CHECK_THROWS_WITH(bad([](FluidParams& p) { p.k = 0; }).validate(), doctest::Contains("k"));
  CHECK_THROWS_WITH(bad([](FluidParams& p) { p.alpha = 0; }).validate(), doctest::Contains("alpha"));
  CHECK_THROWS_WITH(bad([](FluidParams& p) { p.p1 = 1.5; }).validate(), doctest::Contains("p1"));
  CHECK_THROWS_WITH(bad([](FluidParams& p) { p.p2 = -0.1; }).validate(), doctest::Contains("p2"));
  CHECK_THROWS_WITH(bad([](FluidParams& p) { p.dt = 0; }).validate(), doctest::Contains("dt"));
  CHECK_NOTHROW(fig2().validate());
}

TEST_CASE("regime names") {
  CHECK(fluid::parse_regime("no-turbo") == Regime::no_turbo);
  CHECK(fluid::parse_regime("peer_turbo") == Regime::peer_turbo);
  CHECK(fluid::to_string(Regime::peer_turbo) == "peer-turbo");
  CHECK_THROWS_AS(fluid::parse_regime("turbo"), std::invalid_argument);
}

TEST_CASE("peer-turbo step matches a hand evaluation") {
  auto p = fig2(Regime::peer_turbo);
  p.k = 3;
  const double c1 = 45.0 / 1300.0;
  const SurvivalState s{7, {1.0, 0.5, 0.2, 0.0}};
  const auto next = fluid::step_peer_turbo(s, p);
  CHECK(next.step == 8);
  CHECK(std::abs(next.F[1] - (0.5 + (c1 + 0.9 * 0.5) * 0.5)) < 1e-12);
  CHECK(std::abs(next.F[2] - (0.2 + (c1 + 0.9 * 0.2) * 0.3)) < 1e-12);
  CHECK(std::abs(next.F[3] - (c1 * 0.2)) < 1e-12);
}

TEST_CASE("peer-turbo rate is capped so the update cannot overshoot") {
  auto p = fig2(Regime::peer_turbo);
  p.m = 10;  // c1 = 1
  p.k = 3;
  const SurvivalState s{0, {1.0, 0.5, 0.5, 0.4}};
  const auto next = fluid::step_peer_turbo(s, p);
  CHECK_FALSE(check_survival_state(next));
  CHECK(next.F[2] == 0.5);
  CHECK(next.F[3] == 0.5);
}
