// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cuspext/admissibility.hpp"
#include "cuspext/bilip.hpp"
#include "cuspext/extension.hpp"
#include "cuspext/lipschitzify.hpp"
#include "cuspext/quadrature.hpp"
#include "oracles.hpp"

using namespace cuspext;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " FAILED: " << what << ';';
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

CuspProfile two_step() { return CuspProfile::step({0.5, 1.0}, {0.1, 0.3}); }

CuspProfile random_monotone_table(std::uint64_t seed, std::size_t rows) {
  Rng rng(seed);
  std::vector<double> t(rows), v(rows);
  double acc = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    t[i] = static_cast<double>(i + 1) / static_cast<double>(rows);
    acc += uniform(rng, 0.0, 0.02) + 1e-4;
    v[i] = acc;
  }
  return CuspProfile::tabulated(t, v);
}

DomainPoint sample_in(const DomainSpec& spec, Rng& rng) {
  const double t = uniform(rng, 0.0, 2.0);
  const double r = t <= 1.0 ? spec.psi.value_or_zero(t) : spec.psi.at_one();
  return {t, random_in_ball(rng, static_cast<std::size_t>(spec.n - 1), r)};
}

void hat_construction(Outcome& o) {
  const auto sq = CuspProfile::power(1.0, 2.0);
  const double oracle_value = oracle::hat([](double t) { return t * t; }, 0.5);
  const double err = std::abs(hat_psi(sq, 0.5) - oracle_value);
  const double closed = std::abs(oracle_value - (3.0 - std::sqrt(5.0)) / 2.0);
  o.detail << " t^2: |hat(0.5) - oracle| = " << err << ", oracle vs closed form " << closed << ';';
  o.require(err <= 1e-10 && closed <= 1e-10, "hat of t^2 at 0.5");

  const auto lin = CuspProfile::linear(0.2);
  const auto wrapped = CuspProfile::custom("wrapped", [](double t) { return 0.2 * t; });
  int mismatches = 0;
  double bisection_gap = 0.0;
  for (double t : log_grid(1e-4, 0.99, 100)) {
    if (hat_psi(lin, t) != lin(t)) ++mismatches;
    bisection_gap = std::max(bisection_gap, std::abs(hat_psi(wrapped, t) - lin(t)));
  }
  o.detail << " linear: " << mismatches << " mismatches on 100 nodes, bisection gap " << bisection_gap << ';';
  o.require(mismatches == 0, "linear profile is its own hat");
  o.require(bisection_gap <= 1e-14, "bisection route for the linear profile");

  const auto st = two_step();
  const double slope = 1.0 + st.at_one();
  const double a = (0.5 + 0.1) / slope, b = (0.5 + 0.3) / slope;
  double affine = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double th = a + (b - a) * i / 100.0;
    affine = std::max(affine, std::abs(hat_psi(st, th) - (slope * th - 0.5)));
  }
  o.detail << " two-step: max deviation from slope " << slope << " line " << affine << ';';
  o.require(affine <= 1e-10, "two-step hat affine across the jump");
}

void lipschitz_bound(Outcome& o) {
  const std::vector<std::pair<std::string, CuspProfile>> profiles{
      {"t^2", CuspProfile::power(1.0, 2.0)},
      {"t^3", CuspProfile::power(1.0, 3.0)},
      {"step", two_step()},
      {"tabulated", random_monotone_table(17, 40)}};
  for (const auto& [name, psi] : profiles) {
    Rng rng(2024);
    const double bound = 1.0 + psi.at_one();
    double worst = 0.0;
    int violations = 0;
    for (int k = 0; k < 10000; ++k) {
      const double a = uniform(rng, 1e-12, 1.0), b = uniform(rng, 1e-12, 1.0);
      if (a >= 1.0 || b >= 1.0) continue;
      const double excess = std::abs(hat_psi(psi, a) - hat_psi(psi, b)) - bound * std::abs(a - b);
      worst = std::max(worst, excess);
      if (excess > 2.0 * kDefaultSolverTol) ++violations;
    }
    o.detail << ' ' << name << ": worst excess " << worst << ';';
    o.require(violations == 0, name + " Lipschitz bound");
  }
}

void transformation(Outcome& o) {
  const double deltas[] = {1e-3, 1e-5, 1e-7};
  for (const auto& [name, psi] : std::vector<std::pair<std::string, CuspProfile>>{
           {"t^2", CuspProfile::power(1.0, 2.0)}, {"step", two_step()}}) {
    const DomainSpec spec = normalize(DomainSpec::make(3, psi)).spec;
    Rng rng(99);
    double worst = 0.0;
    for (int k = 0; k < 100000; ++k) {
      const DomainPoint z = uniform_point_in_box(3, {}, rng);
      worst = std::max(worst, distance(inverse_map(spec, forward_map(spec, z)), z));
    }
    o.detail << ' ' << name << ": round trip " << worst << ';';
    o.require(worst <= 1e-9, name + " round trip");
    for (const auto& s : bilip_seam_continuity(spec, deltas, 200, 5)) {
      if (!s.stable) o.detail << " seam " << s.seam << " unstable;";
      o.require(s.stable, name + " seam " + s.seam);
    }
    const ImageCheck img = verify_image(spec, 10000, 7, 1e-8);
    o.detail << " image checked " << img.checked_forward << '/' << img.checked_inverse << ';';
    o.require(img.ok, name + " image membership: " + img.failure);
  }
}

void extension_operator(Outcome& o) {
  const auto lipschitz_psi = CuspProfile::power(0.25, 2.0);
  const auto ctx = ExtensionContext::make(DomainSpec::make(3, lipschitz_psi));
  const double deltas[] = {1e-2, 1e-3, 1e-4};
  for (const auto& name : test_function_names()) {
    const auto u = test_function(name, {.psi_at_one = lipschitz_psi.at_one()});
    const auto e = extend_lipschitz(ctx, u);
    Rng rng(31);
    int trace_mismatch = 0;
    for (int k = 0; k < 10000; ++k) {
      const DomainPoint z = sample_in(ctx.spec(), rng);
      if (e(z) != u(z)) ++trace_mismatch;
    }
    o.require(trace_mismatch == 0, name + " exact trace");
    const BoundaryDecay d = boundary_decay(ctx, u, e, 1000, deltas, 13);
    o.require(d.ok, name + " boundary decay");
    if (name == "sin_cos") o.detail << " decay worst ratio " << d.worst_ratio << ';';
  }

  const auto u = test_function("sin_cos");
  const auto v = test_function("capped_power");
  const auto eu = extend_lipschitz(ctx, u), ev = extend_lipschitz(ctx, v);
  const auto ew = extend_lipschitz(ctx, linear_combination(0.7, u, -1.3, v));
  Rng rng(32);
  double lin = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const DomainPoint z = uniform_point_in_box(3, {-0.5, 3.5, 0.6}, rng);
    lin = std::max(lin, std::abs(ew(z) - (0.7 * eu(z) - 1.3 * ev(z))));
  }
  o.detail << " linearity " << lin << ';';
  o.require(lin <= 1e-12, "linearity");

  for (const auto& [name, psi] : std::vector<std::pair<std::string, CuspProfile>>{
           {"t^2", CuspProfile::power(1.0, 2.0)}, {"step", two_step()}}) {
    const DomainSpec spec = DomainSpec::make(3, psi);
    const auto eg = extend_general(spec, u);
    Rng r(33);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const DomainPoint z = sample_in(spec, r);
      worst = std::max(worst, std::abs(eg(z) - u(z)));
    }
    o.detail << " general trace " << name << ' ' << worst << ';';
    o.require(worst <= 1e-8, "general trace " + name);
  }
}

void norm_inequality(Outcome& o) {
  const QuadratureScheme scheme;
  double worst_delta = 0.0;
  std::size_t reports = 0;
  for (const auto& psi : {CuspProfile::power(0.25, 2.0), CuspProfile::power(0.25, 3.0)}) {
    const DomainSpec spec = DomainSpec::make(3, psi);
    for (auto [p, q] : {std::pair{2.0, 1.0}, {4.0, 1.0}, {4.0, 1.9}}) {
      for (const auto& name : test_function_names()) {
        const auto u = test_function(name, {.psi_at_one = psi.at_one()});
        const NormReport r = extension_ratio(u, spec, p, q, scheme);
        const bool finite = r.ratio && std::isfinite(*r.ratio);
        o.require(finite, name + " finite ratio");
        if (!finite || !r.refinement_delta) continue;
        worst_delta = std::max(worst_delta, *r.refinement_delta);
        o.require(*r.refinement_delta < 0.05, name + " refinement change");
        ++reports;
      }
    }
  }
  o.detail << ' ' << reports << " ratios, worst refinement change " << worst_delta << ';';
  // (n-1)q/(n-1-q) = 38 > 4 for (p, q) = (4, 1.9); the pair is computed as listed
  o.detail << " note: (4, 1.9) lies outside (n-1)q/(n-1-q) <= p;";
}

void quadrature_oracle(Outcome& o) {
  const DomainSpec spec = DomainSpec::make(3, CuspProfile::power(1.0, 2.0));
  const double vol = lp_norm(test_function("constant"), IntegrationRegion::domain(spec), 1.0, QuadratureScheme{});
  const double rel = std::abs(vol - 6.0 * std::numbers::pi / 5.0) / (6.0 * std::numbers::pi / 5.0);
  o.detail << " volume relative error " << rel << ';';
  o.require(rel <= 1e-4, "volume");
  const GaussRule g = gauss_legendre(2);
  double worst = 0.0;
  for (int deg = 0; deg <= 3; ++deg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) sum += g.weights[i] * std::pow(g.nodes[i], deg);
    worst = std::max(worst, std::abs(sum - (deg % 2 ? 0.0 : 2.0 / (deg + 1))));
  }
  // a cubic in t over the cylinder part with the default rule
  const double cubic = integrate(IntegrationRegion::cylinder(3, 1.0, 2.0, 1.0), QuadratureScheme{},
                                 [](const DomainPoint& z) { return z.t * z.t * z.t - 2.0 * z.t + 1.0; })
                           .value;
  worst = std::max(worst, std::abs(cubic - std::numbers::pi * (15.0 / 4.0 - 3.0 + 1.0)));
  o.detail << " degree-3 error " << worst << ';';
  o.require(worst <= 1e-12, "Gauss exactness");
}

void criteria(Outcome& o) {
  int wrong = 0, inconclusive = 0;
  for (int i = 0; i < 20; ++i) {
    const double s = 1.2 + 0.15 * i;
    for (int j = 0; j < 20; ++j) {
      const double sp = 1.125 + 0.15 * j;
      const auto c = check_inc1(CuspProfile::power(1.0, sp), s, 3);
      if (c.verdict == Convergence::Inconclusive) {
        ++inconclusive;
        continue;
      }
      if ((c.verdict == Convergence::Convergent) != (sp < s)) ++wrong;
    }
  }
  o.detail << " grid: " << wrong << " misclassified, " << inconclusive << " inconclusive;";
  o.require(wrong == 0, "inc1 classification");
  const auto sigmas = arithmetic_grid(1.1, 5.0, 0.1);
  const SweepResult e3 = admissibility_sweep(3, 4.0, 2.0, sigmas);
  const SweepResult e2 = admissibility_sweep(3, 1.5, 1.0, sigmas);
  o.require(e3.frontier && std::abs(*e3.frontier - threshold_s1(3, 4.0)) <= 0.1, "s1 frontier");
  o.require(e2.frontier && std::abs(*e2.frontier - threshold_s2(3, 1.5, 1.0)) <= 0.1, "s2 frontier");
  if (e3.frontier) o.detail << " s1 frontier " << *e3.frontier << ';';
  if (e2.frontier) o.detail << " s2 frontier " << *e2.frontier << ';';
}

void structural_transfer(Outcome& o) {
  const auto grid = log_grid(1e-6, 1.0, 400);
  for (const auto& [name, psi] : std::vector<std::pair<std::string, CuspProfile>>{
           {"t^2", CuspProfile::power(1.0, 2.0)}, {"t^3", CuspProfile::power(1.0, 3.0)}, {"step", two_step()}}) {
    const bool hypothesis = check_quotient_hypothesis(psi, grid).ok;
    if (hypothesis) {
      o.require(verify_monotone_quotient(psi, grid).ok, name + " monotone quotient");
      o.detail << ' ' << name << ": quotient preserved;";
    } else {
      o.detail << ' ' << name << ": hypothesis not satisfied;";
    }
    const DoublingTransfer d = verify_doubling_transfer(psi, grid);
    o.detail << ' ' << name << ": doubling " << d.max_ratio << " <= " << d.bound << ';';
    o.require(d.ok, name + " doubling");
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "hat construction", 1.0, hat_construction},
      {2, "Lipschitz bound", 10.0, lipschitz_bound},
      {3, "transformation", 30.0, transformation},
      {4, "extension operator", 60.0, extension_operator},
      {5, "norm inequality", 600.0, norm_inequality},
      {6, "quadrature oracle", 5.0, quadrature_oracle},
      {7, "integrability criteria", 60.0, criteria},
      {8, "structural transfer", 5.0, structural_transfer},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " exception: " << e.what() << ';';
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      o.ok = false;
      o.detail << " over budget;";
    }
    std::printf("[%s] criterion %d: %s (%.2f s of %.0f s)%s\n", o.ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                seconds, c.budget_seconds, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
