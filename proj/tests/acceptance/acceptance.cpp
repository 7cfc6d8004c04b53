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

// Prints one PASS/FAIL line per acceptance criterion and exits non-zero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ptpath/config.hpp"
#include "ptpath/diagnostics.hpp"
#include "ptpath/engine.hpp"
#include "ptpath/models.hpp"
#include "ptpath/objective.hpp"
#include "ptpath/schedule.hpp"
#include "ptpath/tuner.hpp"

using namespace ptpath;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

NrptResult linear_run(const GaussianPair& g, int N, std::uint64_t sweeps,
                      std::uint64_t seed) {
  NrptOptions opt;
  opt.seed = seed;
  return run_nrpt(Ensemble::initial(g, N + 1), PathDescriptor::linear(),
                  Schedule::uniform(N), sweeps, g, opt);
}

// 1. Summed rejections on the linear path match z / sqrt(pi).
Verdict criterion1() {
  const Timer timer;
  const GaussianPair g = gaussian_pair(-1, 1, 0.2, 1);
  const NrptResult res = linear_run(g, 32, 20000, 1);
  const auto r = res.rejection();
  const double sum = std::accumulate(r.begin(), r.end(), 0.0);
  const double target = lambda_linear_gaussian(10.0);
  const double secs = timer.seconds();
  const bool ok = std::abs(sum - target) <= 0.07 * target && secs < 30.0;
  return {ok, fmt("sum r = %.4f, z/sqrt(pi) = %.4f (tol 7%%), %.1f s", sum,
                  target, secs)};
}

// 2. Measured round-trip rate against the formula, and the pi0 = pi1 limit.
Verdict criterion2() {
  const GaussianPair g = gaussian_pair(-1, 1, 0.2, 1);
  const NrptResult res = linear_run(g, 32, 20000, 1);
  const double measured = res.round_trip_rate();
  const double predicted = predicted_round_trip_rate(res.rejection());
  const GaussianPair same = gaussian_pair(0, 0, 0.2, 1);
  const double flat = linear_run(same, 32, 20000, 2).round_trip_rate();
  const bool ok = std::abs(measured - predicted) <= 0.15 * predicted &&
                  std::abs(flat - 0.5) <= 0.05 * 0.5;
  return {ok, fmt("measured %.5f vs predicted %.5f (tol 15%%); identical "
                  "endpoints %.4f vs 0.5 (tol 5%%)",
                  measured, predicted, flat)};
}

// 3. The tuned spline path beats the linear-path asymptotic bound.
Verdict criterion3() {
  const Timer timer;
  const GaussianPair g = gaussian_pair(-1, 1, 0.2, 1);
  const double bound = linear_gaussian_rate(10.0);
  int wins = 0;
  std::ostringstream rates;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TuningConfig c;
    c.intervals = 50;
    c.knots = 4;
    c.rounds = 50;
    c.sweeps_per_round = 300;
    c.seed = seed;
    const TuningTrace trace = path_opt_nrpt(g, c);
    if (trace.error || trace.rounds.size() < 5) continue;
    double mean = 0.0;
    for (std::size_t i = trace.rounds.size() - 5; i < trace.rounds.size(); ++i) {
      mean += trace.rounds[i].round_trip_rate / 5.0;
    }
    rates << (seed > 1 ? " " : "") << fmt("%.4f", mean);
    wins += mean > bound;
  }
  const double secs = timer.seconds();
  return {wins >= 8 && secs < 300.0,
          fmt("%d/10 seeds above %.4f (need 8); rates [", wins, bound) +
              rates.str() + fmt("], %.1f s", secs)};
}

// 4. Geodesic over linear rate ratio grows with z.
Verdict criterion4() {
  const Timer timer;
  double prev = 0.0;
  bool increasing = true;
  std::ostringstream ratios;
  for (double z : {10.0, 50.0, 200.0}) {
    const double ratio = geodesic_bound_rate(z) / linear_gaussian_rate(z);
    increasing = increasing && ratio > prev;
    prev = ratio;
    ratios << fmt(" z=%g: %.3f", z, ratio);
  }
  const double secs = timer.seconds();
  return {increasing && secs < 1.0, "ratio" + ratios.str()};
}

// 5. Beta-binomial endpoint laws.
Verdict criterion5() {
  const BetaBinomialPair m = beta_binomial_pair(180, 840, 140000, 200000);
  const auto ref = m.tempered(kReferenceEndpoint);
  const auto tgt = m.tempered(kTargetEndpoint);
  const bool ok = ref.alpha == 180.0 && ref.beta == 840.0 &&
                  tgt.alpha == 140180.0 && tgt.beta == 60840.0;
  return {ok, fmt("eta=(1,0): Beta(%g,%g); eta=(0,1): Beta(%g,%g)", ref.alpha,
                  ref.beta, tgt.alpha, tgt.beta)};
}

// Batches of W(x) with x = mean + sd * xi; the shared xi are the common
// random numbers across perturbed paths.
std::vector<WeightBatch> reparameterized_batches(
    const GaussianPair& g, const PathDescriptor& path, const Schedule& sched,
    const std::vector<std::vector<double>>& xi) {
  std::vector<WeightBatch> out(sched.size());
  for (std::size_t n = 0; n < sched.size(); ++n) {
    const AnnealingCoordinates eta = path.eta(sched[n]);
    const double m = g.tempered_mean(eta);
    const double s = std::sqrt(g.tempered_variance(eta));
    out[n].reserve(xi[n].size());
    for (double e : xi[n]) out[n].push_back(g.log_weights({m + s * e}));
  }
  return out;
}

SplineKnots knots_from_psi(const SplineKnots& base,
                           const std::vector<double>& psi) {
  std::vector<AnnealingCoordinates> k(base.knots().begin(), base.knots().end());
  for (int i = 1; i < base.segments(); ++i) {
    k[i] = {std::exp(psi[2 * (i - 1)]), std::exp(psi[2 * (i - 1) + 1])};
  }
  return SplineKnots(k);
}

// 6. SKL gradient against central finite differences.
Verdict criterion6() {
  const Timer timer;
  const GaussianPair g = gaussian_pair(-1, 1, 0.2, 1);
  const Schedule sched = Schedule::uniform(10);
  const SplineKnots knots({{1, 0}, {0.4, 0.5}, {0, 1}});
  std::mt19937_64 gen(2026);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> xi(sched.size(),
                                      std::vector<double>(100000));
  for (auto& row : xi) {
    for (double& v : row) v = normal(gen);
  }
  const auto est = estimate_skl_gradient(
      knots, sched,
      reparameterized_batches(g, PathDescriptor::spline(knots), sched, xi));
  const std::vector<double> psi = log_knot_coordinates(knots);
  double worst = 0.0;
  std::ostringstream pairs;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double h = 1e-4;
    std::vector<double> up = psi, dn = psi;
    up[i] += h;
    dn[i] -= h;
    const PathDescriptor pu = PathDescriptor::spline(knots_from_psi(knots, up));
    const PathDescriptor pd = PathDescriptor::spline(knots_from_psi(knots, dn));
    const double fd =
        (estimate_skl(pu, sched, reparameterized_batches(g, pu, sched, xi)) -
         estimate_skl(pd, sched, reparameterized_batches(g, pd, sched, xi))) /
        (2 * h);
    const double rel = std::abs(est.gradient[i] - fd) / std::abs(fd);
    worst = std::max(worst, rel);
    pairs << fmt(" [%.4f vs %.4f]", est.gradient[i], fd);
  }
  const double secs = timer.seconds();
  return {worst < 1e-2 && secs < 60.0,
          fmt("max relative error %.2e (tol 1e-2);", worst) + pairs.str() +
              fmt(", %.1f s", secs)};
}

double spread(const std::vector<double>& r) {
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  return *hi - *lo;
}

// Max-min rejection spread before and after two schedule adaptations,
// averaged over five seeds.
std::pair<double, double> equalization(const PathDescriptor& path) {
  const GaussianPair g = gaussian_pair(-1, 1, 0.2, 1);
  const int N = 16;
  const std::uint64_t M = 5000;
  double initial = 0.0;
  double adapted = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    NrptOptions opt;
    opt.seed = seed;
    Schedule sched = Schedule::uniform(N);
    Ensemble e = Ensemble::initial(g, N + 1);
    for (int round = 0; round < 2; ++round) {
      NrptResult res = run_nrpt(std::move(e), path, sched, M, g, opt);
      if (round == 0) initial += spread(res.rejection()) / 5.0;
      sched = update_schedule(fit_cumulative_barrier(sched, res.rejection()), N);
      e = std::move(res.final_ensemble);
    }
    opt.seed = seed + 100;
    adapted +=
        spread(run_nrpt(std::move(e), path, sched, M, g, opt).rejection()) / 5.0;
  }
  return {initial, adapted};
}

// 7. Two adaptation rounds halve the rejection spread. The linear path's
// uniform grid is already equal up to noise, so the check runs on a bent
// spline path where the uniform grid is visibly unequal.
Verdict criterion7() {
  const auto [initial, adapted] = equalization(
      PathDescriptor::spline(SplineKnots({{1, 0}, {0.1, 0.1}, {0, 1}})));
  const auto [lin_initial, lin_adapted] = equalization(PathDescriptor::linear());
  return {adapted <= 0.5 * initial,
          fmt("bent spline spread %.4f -> %.4f (need <= 50%%); linear path "
              "%.4f -> %.4f (info)",
              initial, adapted, lin_initial, lin_adapted)};
}

// 8. Secant gap over delta squared shrinks with delta.
Verdict criterion8() {
  const GaussianPair g = gaussian_pair(-1, 1, 1.0, 1);
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  std::ostringstream ratios;
  for (double d : {0.2, 0.1, 0.05, 0.025}) {
    const SecantComparison c =
        compare_secant(PathDescriptor::linear(), 0.5, 0.5 + d, g, 1000000, 64, 7);
    const double ratio = std::abs(c.difference.mean) / (d * d);
    decreasing = decreasing && ratio < prev;
    prev = ratio;
    ratios << fmt(" d=%g: %.5f (se %.1e)", d, ratio,
                  c.difference.standard_error / (d * d));
  }
  return {decreasing, "e/d^2" + ratios.str()};
}

// 9. SNR ordering at both ends of the grid.
Verdict criterion9() {
  const std::vector<double> grid = default_snr_grid();
  const std::vector<SnrRow> rows = snr_experiment(grid, 50, 1000, 1);
  // Rows alternate rejection, skl per grid point; grid[0] = 0 has zero
  // signal for both, so the low end is the first positive phi.
  const SnrRow& rej_lo = rows[2];
  const SnrRow& skl_lo = rows[3];
  const SnrRow& rej_hi = rows[rows.size() - 2];
  const SnrRow& skl_hi = rows[rows.size() - 1];
  const bool ok = rej_lo.snr > skl_lo.snr && skl_hi.snr > rej_hi.snr &&
                  rej_hi.phi == 2.0;
  return {ok, fmt("phi=%.1f: rejection %.3f vs skl %.3f; phi=%.1f: rejection "
                  "%.3f vs skl %.3f",
                  rej_lo.phi, rej_lo.snr, skl_lo.snr, rej_hi.phi, rej_hi.snr,
                  skl_hi.snr)};
}

// 10. Benchmark curve ordering on the Gaussian z=200 and galaxy workloads.
// The Gaussian run uses the full budget; the galaxy run uses a fifth of it.
Verdict criterion10() {
  struct Case {
    std::string label;
    std::unique_ptr<LogDensityPair> model;
    TuningConfig config;
  };
  std::vector<Case> cases;
  {
    TuningConfig c;
    c.intervals = 50;
    c.knots = 4;
    c.rounds = 150;
    c.sweeps_per_round = 300;
    c.learning_rate = 0.2;
    cases.push_back({"gaussian z=200 (S=150, M=300)",
                     std::make_unique<GaussianPair>(-1, 1, 0.01, 1), c});
  }
  {
    std::vector<double> data =
        load_observations_csv(bundled_data_dir() / "galaxy.csv");
    for (double& x : data) x *= 1e-3;
    TuningConfig c;
    c.intervals = 35;
    c.knots = 4;
    c.rounds = 100;
    c.sweeps_per_round = 100;
    c.learning_rate = 0.3;
    cases.push_back({"galaxy (S=100, M=100)",
                     std::make_unique<GmmPair>(std::move(data), 6, 150.0, 1.0,
                                               1.0, true),
                     c});
  }
  bool ok = true;
  std::ostringstream detail;
  for (const Case& k : cases) {
    const Timer timer;
    const BenchmarkTable t = run_benchmark(
        *k.model, k.config, {"spline", "nrpt-linear", "reversible-linear"});
    const auto total = [&](int i) {
      const auto& c = t.curves[i].cumulative_round_trips;
      return c.empty() ? 0ull : static_cast<unsigned long long>(c.back());
    };
    ok = ok && total(0) > total(1) && total(1) > total(2);
    detail << fmt("%s: spline %llu > nrpt-linear %llu > reversible-linear "
                  "%llu, %.0f s; ",
                  k.label.c_str(), total(0), total(1), total(2),
                  timer.seconds());
  }
  return {ok, detail.str()};
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("criterion %zu: %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
