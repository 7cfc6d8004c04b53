// Copyright 2026 The ptpath Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ptpath/errors.hpp"
#include "ptpath/paths.hpp"

using namespace ptpath;

namespace {

using Knots = std::vector<AnnealingCoordinates>;

const SplineKnots kHalfway({{1, 0}, {0.5, 0.5}, {0, 1}});

void check_close(AnnealingCoordinates a, AnnealingCoordinates b,
                 double tol = 1e-12) {
  CHECK(a.eta0 == doctest::Approx(b.eta0).epsilon(tol));
  CHECK(a.eta1 == doctest::Approx(b.eta1).epsilon(tol));
}

// Independent statement of the repair rule: knot `next` may follow `last`
// when it is finite, componentwise monotone, inside the unit box and not a
// copy of `last` or of the target endpoint.
bool may_follow(AnnealingCoordinates last, AnnealingCoordinates next) {
  if (!std::isfinite(next.eta0) || !std::isfinite(next.eta1)) return false;
  if (next == last || next == kTargetEndpoint) return false;
  return next.eta0 >= 0.0 && next.eta0 <= last.eta0 &&
         next.eta1 >= last.eta1 && next.eta1 <= 1.0;
}

// Enumerates every subset of interior knots, keeps the valid chains and
// returns the one whose inclusion vector is lexicographically largest, then
// refills the gaps evenly.
Knots exhaustive_repair(const Knots& in) {
  const int interior = static_cast<int>(in.size()) - 2;
  std::vector<int> best;
  for (int mask = (1 << interior) - 1; mask >= 0; --mask) {
    // Iterating masks downward with bit (interior-1-i) for knot i visits
    // inclusion vectors in lexicographically decreasing order.
    std::vector<int> kept{0};
    bool ok = true;
    for (int i = 0; i < interior && ok; ++i) {
      if (mask & (1 << (interior - 1 - i))) {
        ok = may_follow(in[kept.back()], in[i + 1]);
        kept.push_back(i + 1);
      }
    }
    if (ok) {
      kept.push_back(interior + 1);
      best = kept;
      break;
    }
  }
  Knots out(in.size());
  for (std::size_t j = 0; j + 1 < best.size(); ++j) {
    const int a = best[j];
    const int b = best[j + 1];
    for (int k = a; k <= b; ++k) {
      const double w = static_cast<double>(k - a) / (b - a);
      out[k] = (1.0 - w) * in[a] + w * in[b];
    }
  }
  out.front() = kReferenceEndpoint;
  out.back() = kTargetEndpoint;
  return out;
}

}  // namespace

TEST_SUITE("paths") {

TEST_CASE("eta_linear examples and domain") {
  CHECK(eta_linear(0.0) == AnnealingCoordinates{1, 0});
  CHECK(eta_linear(1.0) == AnnealingCoordinates{0, 1});
  CHECK(eta_linear(0.25) == AnnealingCoordinates{0.75, 0.25});
  CHECK_THROWS_AS(eta_linear(-0.01), DomainError);
  CHECK_THROWS_AS(eta_linear(1.01), DomainError);
  CHECK_THROWS_AS(eta_linear(std::nan("")), DomainError);
}

TEST_CASE("eta_spline examples") {
  CHECK(eta_spline(kHalfway, 0.0) == AnnealingCoordinates{1, 0});
  check_close(eta_spline(kHalfway, 0.25), {0.75, 0.25});
  check_close(eta_spline(kHalfway, 0.5), {0.5, 0.5});
  CHECK(eta_spline(kHalfway, 1.0) == AnnealingCoordinates{0, 1});
  CHECK_THROWS_AS(eta_spline(kHalfway, 1.5), DomainError);
}

TEST_CASE("spline position uses the right segment at interior knots") {
  const SplinePosition at_knot = spline_position(4, 0.5);
  CHECK(at_knot.segment == 3);
  CHECK(at_knot.left_weight == doctest::Approx(1.0));
  CHECK(at_knot.right_weight == doctest::Approx(0.0));
  CHECK(spline_position(4, 0.0).segment == 1);
  CHECK(spline_position(4, 1.0).segment == 4);
  CHECK(spline_position(4, 1.0).right_weight == doctest::Approx(1.0));
  const SplinePosition mid = spline_position(4, 0.3);
  CHECK(mid.segment == 2);
  CHECK(mid.left_weight == doctest::Approx(0.8));
  CHECK(mid.right_weight == doctest::Approx(0.2));
}

TEST_CASE("spline knots reject invariant violations") {
  CHECK_THROWS_AS(SplineKnots({{1, 0}}), ConstraintError);
  CHECK_THROWS_AS(SplineKnots({{0.9, 0}, {0, 1}}), ConstraintError);
  CHECK_THROWS_AS(SplineKnots({{1, 0}, {0, 0.9}}), ConstraintError);
  CHECK_THROWS_AS(SplineKnots({{1, 0}, {0.3, 0.2}, {0.4, 0.5}, {0, 1}}),
                  ConstraintError);
  CHECK_THROWS_AS(SplineKnots({{1, 0}, {0.3, 0.6}, {0.2, 0.5}, {0, 1}}),
                  ConstraintError);
  CHECK_THROWS_AS(
      SplineKnots({{1, 0}, {std::numeric_limits<double>::infinity(), 0.5},
                   {0, 1}}),
      ConstraintError);
  CHECK_NOTHROW(SplineKnots({{1, 0}, {1, 0}, {0, 1}}));
  CHECK(SplineKnots::linear(4)[1] == AnnealingCoordinates{0.75, 0.25});
}

TEST_CASE("monotone_repair fixed point on monotone knots") {
  const Knots knots{{1, 0}, {0.6, 0.1}, {0.2, 0.3}, {0.05, 0.9}, {0, 1}};
  const SplineKnots repaired = monotone_repair(knots);
  CHECK(repaired == SplineKnots(knots));
  CHECK(monotone_repair(repaired.knots()) == repaired);
}

TEST_CASE("monotone_repair drops the nonmonotone knot and refills") {
  const Knots knots{{1, 0}, {0.4, 0.6}, {0.7, 0.3}, {0, 1}};
  const SplineKnots repaired = monotone_repair(knots);
  // Greedy keeps (0.4,0.6); the slot after it is refilled halfway to (0,1).
  check_close(repaired[1], {0.4, 0.6});
  check_close(repaired[2], {0.2, 0.8});
  CHECK(repaired[0] == kReferenceEndpoint);
  CHECK(repaired[3] == kTargetEndpoint);
  for (std::size_t k = 0; k < knots.size(); ++k) {
    check_close(repaired[k], exhaustive_repair(knots)[k]);
  }
}

TEST_CASE("monotone_repair refills interior knots sitting on an endpoint") {
  for (AnnealingCoordinates e : {kReferenceEndpoint, kTargetEndpoint}) {
    const SplineKnots repaired = monotone_repair(Knots{{1, 0}, e, e, {0, 1}});
    check_close(repaired[1], {2.0 / 3.0, 1.0 / 3.0});
    check_close(repaired[2], {1.0 / 3.0, 2.0 / 3.0});
  }
}

TEST_CASE("monotone_repair requires pinned endpoints") {
  CHECK_THROWS_AS(monotone_repair(Knots{{0.9, 0}, {0.5, 0.5}, {0, 1}}),
                  ConstraintError);
}

TEST_CASE("monotone_repair matches the exhaustive subsequence oracle") {
  std::mt19937_64 gen(11);
  // Coarse grid so that ties and superpositions occur often.
  std::uniform_int_distribution<int> cell(0, 5);
  for (int trial = 0; trial < 3000; ++trial) {
    const int interior = 1 + trial % 7;
    Knots knots{kReferenceEndpoint};
    for (int i = 0; i < interior; ++i) {
      knots.push_back({cell(gen) / 5.0, cell(gen) / 5.0});
    }
    knots.push_back(kTargetEndpoint);
    const SplineKnots repaired = monotone_repair(knots);
    const Knots expected = exhaustive_repair(knots);
    for (std::size_t k = 0; k < knots.size(); ++k) {
      REQUIRE(repaired[k].eta0 == doctest::Approx(expected[k].eta0));
      REQUIRE(repaired[k].eta1 == doctest::Approx(expected[k].eta1));
    }
    REQUIRE(SplineKnots::satisfies_invariants(repaired.knots()));
    REQUIRE(monotone_repair(repaired.knots()) == repaired);
  }
}

TEST_CASE("monotone_repair handles wild inputs") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> wild(0.5, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    Knots knots{kReferenceEndpoint};
    for (int i = 0; i < 6; ++i) knots.push_back({wild(gen), wild(gen)});
    if (trial % 10 == 0) knots[3].eta0 = std::nan("");
    knots.push_back(kTargetEndpoint);
    const SplineKnots repaired = monotone_repair(knots);
    REQUIRE(repaired.segments() == 7);
    REQUIRE(monotone_repair(repaired.knots()) == repaired);

    // Monotone flow along a dense grid.
    const PathDescriptor path = PathDescriptor::spline(repaired);
    AnnealingCoordinates prev = path.eta(0.0);
    for (int i = 1; i <= 700; ++i) {
      const AnnealingCoordinates cur = path.eta(i / 700.0);
      REQUIRE(cur.eta0 <= prev.eta0 + 1e-15);
      REQUIRE(cur.eta1 >= prev.eta1 - 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("spline values are convex combinations of consecutive knots") {
  const SplineKnots knots(
      Knots{{1, 0}, {0.7, 0.05}, {0.3, 0.1}, {0.1, 0.6}, {0, 1}});
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    const AnnealingCoordinates e = eta_spline(knots, t);
    const SplinePosition pos = spline_position(4, t);
    const AnnealingCoordinates a = knots[pos.segment - 1];
    const AnnealingCoordinates b = knots[pos.segment];
    CHECK(pos.left_weight + pos.right_weight == doctest::Approx(1.0));
    CHECK(pos.left_weight >= 0.0);
    CHECK(pos.right_weight >= 0.0);
    CHECK(e.eta0 >= std::min(a.eta0, b.eta0) - 1e-15);
    CHECK(e.eta0 <= std::max(a.eta0, b.eta0) + 1e-15);
    CHECK(e.eta1 >= std::min(a.eta1, b.eta1) - 1e-15);
    CHECK(e.eta1 <= std::max(a.eta1, b.eta1) + 1e-15);
  }
}

TEST_CASE("endpoint pinning for every path kind") {
  const PathDescriptor linear = PathDescriptor::linear();
  const PathDescriptor spline = PathDescriptor::spline(kHalfway);
  const PathDescriptor custom = PathDescriptor::custom([](double t) {
    return AnnealingCoordinates{2.0 * (1.0 - t), t * t};
  });
  for (const PathDescriptor* p : {&linear, &spline, &custom}) {
    CHECK(p->eta(1.0) == kTargetEndpoint);
  }
  CHECK(linear.eta(0.0) == kReferenceEndpoint);
  CHECK(spline.eta(0.0) == kReferenceEndpoint);
  CHECK_THROWS_AS(PathDescriptor::custom([](double t) {
                    return AnnealingCoordinates{1.0 - t, 0.9 * t};
                  }),
                  ConstraintError);
}

TEST_CASE("path derivatives") {
  CHECK(PathDescriptor::linear().eta_derivative(0.3) ==
        AnnealingCoordinates{-1, 1});
  const PathDescriptor spline = PathDescriptor::spline(kHalfway);
  check_close(spline.eta_derivative(0.2), {-1.0, 1.0});
  // At the knot t = 0.5 the right segment's slope applies.
  const PathDescriptor bent = PathDescriptor::spline(
      SplineKnots(Knots{{1, 0}, {0.2, 0.1}, {0, 1}}));
  check_close(bent.eta_derivative(0.5), {2.0 * (0.0 - 0.2), 2.0 * (1.0 - 0.1)});
  check_close(bent.eta_derivative(0.49), {2.0 * (0.2 - 1.0), 2.0 * 0.1});
  const PathDescriptor custom = PathDescriptor::custom([](double t) {
    return AnnealingCoordinates{(1 - t) * (1 - t), 1 - (1 - t) * (1 - t)};
  });
  check_close(custom.eta_derivative(0.4), {-1.2, 1.2}, 1e-6);
}

TEST_CASE("log_density_unnormalized examples") {
  const PathDescriptor linear = PathDescriptor::linear();
  CHECK(log_density_unnormalized(linear, 1.0, {-3.2, -0.7}) == -0.7);
  CHECK(log_density_unnormalized(linear, 0.5, {-2, -4}) == -3.0);
  CHECK(log_density_unnormalized(PathDescriptor::spline(kHalfway), 0.25,
                                 {-2, -4}) == doctest::Approx(-2.5));
  CHECK_THROWS_AS(
      log_density_unnormalized(linear, 0.5, {std::nan(""), 0.0}),
      EvaluationError);
  CHECK_THROWS_AS(
      log_density_unnormalized(
          linear, 0.5, {-std::numeric_limits<double>::infinity(), 0.0}),
      EvaluationError);
}

TEST_CASE("spline_best_approx_bound examples") {
  CHECK(spline_best_approx_bound(1, 1) == doctest::Approx(0.25));
  CHECK(spline_best_approx_bound(4, 2) == doctest::Approx(0.25));
  CHECK(spline_best_approx_bound(1, 10) == doctest::Approx(0.0025));
}

TEST_CASE("K-segment interpolating splines meet the approximation bound") {
  auto target = [](double t) {
    return AnnealingCoordinates{(1 - t) * (1 - t), 1 - (1 - t) * (1 - t)};
  };
  for (int K : {1, 2, 4, 8}) {
    Knots knots;
    for (int k = 0; k <= K; ++k) knots.push_back(target(k / double(K)));
    const SplineKnots phi(knots);
    double sup = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double t = i / 20000.0;
      const AnnealingCoordinates d = eta_spline(phi, t) - target(t);
      sup = std::max({sup, std::abs(d.eta0), std::abs(d.eta1)});
    }
    CHECK(sup <= spline_best_approx_bound(2.0, K));
  }
}

}  // TEST_SUITE
