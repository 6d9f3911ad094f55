// Release gate. Each numbered check below must hold before a build ships;
// the binary prints exactly one PASS/FAIL line per criterion and exits
// nonzero if any of them fail. Tolerances are pinned here, not configurable.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpp/certificates.hpp"
#include "fpp/dynamics.hpp"
#include "fpp/pressure.hpp"
#include "fpp/rng.hpp"
#include "fpp/vectorspace.hpp"

#ifndef FPP_CLI_PATH
#error "FPP_CLI_PATH must point at the built executable"
#endif

using namespace fpp;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  double seconds = 0.0;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(FPP_CLI_PATH) + " " + args + " 2>/dev/null";
  const auto t0 = std::chrono::steady_clock::now();
  FILE* p = popen(cmd.c_str(), "r");
  RunResult r;
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count();
  return r;
}

Vector random_vec(SeededRng& rng, std::size_t d, double lo = -1.0,
                  double hi = 1.0) {
  Vector v(d);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

NormSpec cycle_norm(int i) {
  switch (i % 3) {
    case 0:
      return NormSpec::l1();
    case 1:
      return NormSpec::l2();
    default:
      return NormSpec::linf();
  }
}

dyn::MapSpec random_nonexpansive(SeededRng& rng, std::size_t d) {
  Matrix A(d, d);
  for (auto& x : A.data) x = rng.uniform(-1.0, 1.0);
  const double s = operator_norm(A, NormSpec::l2());
  if (s > 1.0)
    for (auto& x : A.data) x /= s * (1.0 + 1e-12);
  return dyn::MapSpec::affine(A, random_vec(rng, d));
}

int g_failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", id,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

// 1. The whole replication catalogue passes at its stated tolerances through
//    the command-line front end, in at most ten seconds.
void criterion_1() {
  const auto r = run_cli("replicate --all --format structured");
  bool ok = r.exit_code == 0 && r.seconds <= 10.0;
  std::size_t total = 0, passed = 0;
  if (ok) {
    try {
      const json doc = json::parse(r.out);
      total = doc.at("total").get<std::size_t>();
      passed = doc.at("passed_count").get<std::size_t>();
      ok = total >= 15 && passed == total;
    } catch (...) {
      ok = false;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "replication catalogue %zu/%zu cases in %.2fs (need >=15, "
                "<=10s, exit %d)",
                passed, total, r.seconds, r.exit_code);
  report(1, ok, detail);
}

// 2. Signed pressure is nonincreasing in the tuple length and collapses to an
//    exact zero one step past the number of points, on 50 seeded sets.
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    SeededRng rng(1000 + trial);
    const std::size_t m = 2 + rng.below(4);  // 2..5
    const std::size_t d = 1 + rng.below(4);  // 1..4
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < m; ++i) pts.push_back(random_vec(rng, d));

    pressure::PressureQuery q;
    q.set = PointSet(pts, cycle_norm(trial));
    q.base = random_vec(rng, d);
    q.k_max = m + 1;
    const auto rep = pressure::pressure_P(q, pressure::Variant::signed_l1,
                                          pressure::SearchMode::exhaustive);
    ok = ok && rep.per_k.size() == m + 1;
    for (std::size_t i = 1; i < rep.per_k.size() && ok; ++i)
      ok = rep.per_k[i].value <= rep.per_k[i - 1].value + 1e-10;
    ok = ok && rep.per_k.back().value == 0.0;  // exact, not approximate
    ok = ok && rep.exact_zero_rule_applied;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  ok = ok && secs <= 60.0;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "50 seeded sets: values nonincreasing to k=m+1, exact zero "
                "past m (%.2fs, <=60s)",
                secs);
  report(2, ok, detail);
}

// 3. The exact sign-pattern inner solver and a 200-per-coordinate grid agree
//    within the grid resolution 2/200 on 100 seeded instances.
void criterion_3() {
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    SeededRng rng(2000 + trial);
    const std::size_t k = 1 + rng.below(3);  // 1..3
    const std::size_t d = 1 + rng.below(3);  // 1..3
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < k; ++i) vs.push_back(random_vec(rng, d));
    const NormSpec n = cycle_norm(trial);
    const double exact =
        pressure::inner_signed_min(vs, n,
                                   pressure::SignedMethod::exact_sign_patterns)
            .value;
    const double grid =
        pressure::inner_signed_min(vs, n, pressure::SignedMethod::grid_oracle,
                                   200)
            .value;
    worst = std::max(worst, std::fabs(exact - grid));
    ok = std::fabs(exact - grid) <= 2.0 / 200.0;
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "exact sign-pattern solver vs 200-point grid on 100 "
                "instances (worst gap %.3g, tol %.3g)",
                worst, 2.0 / 200.0);
  report(3, ok, detail);
}

// 4. In the Euclidean case the certificate level equals the min-norm-point
//    value (strong duality) to 1e-8 on 100 seeded point sets.
void criterion_4() {
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    SeededRng rng(3000 + trial);
    const std::size_t m = 1 + rng.below(6);  // 1..6
    const std::size_t d = 1 + rng.below(6);  // 1..6
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < m; ++i)
      vs.push_back(random_vec(rng, d, -2.0, 2.0));
    const double gamma = cert::solve_certificate(vs, NormSpec::l2()).gamma;
    const double mn = pressure::inner_unsigned_min(vs, NormSpec::l2()).value;
    worst = std::max(worst, std::fabs(gamma - mn));
    ok = std::fabs(gamma - mn) <= 1e-8;
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "certificate level vs min-norm point on 100 euclidean sets "
                "(worst gap %.3g, tol 1e-8)",
                worst);
  report(4, ok, detail);
}

// 5. On low-coherence unit frames the three lower bounds are ordered:
//    coherence closed form <= spectral <= exhaustive per-k pressure.
void criterion_5() {
  bool ok = true;
  int accepted = 0;
  SeededRng rng(5000);
  while (accepted < 50 && ok) {
    const std::size_t m = 2 + rng.below(4);  // 2..5
    const std::size_t d = m + rng.below(3);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < m; ++i) {
      Vector v = random_vec(rng, d);
      const double nv = norm(v, NormSpec::l2());
      if (nv < 1e-6) continue;
      for (auto& x : v) x /= nv;
      pts.push_back(v);
    }
    if (pts.size() < m) continue;
    const PointSet ps(pts, NormSpec::l2());
    const double mu = cert::mutual_coherence(ps);
    if (mu >= 1.0 / (static_cast<double>(m) - 1.0)) continue;
    ++accepted;

    pressure::PressureQuery q;
    q.set = ps;
    q.base = Vector(d, 0.0);
    const double delta = pressure::resolve_delta(q);
    const double coh = cert::coherence_phi_lower(m, mu).phi_lower;
    const double spec = cert::spectral_phi_lower(ps, delta);
    ok = coh <= spec + 1e-10;
    for (std::size_t k = 1; k <= m && ok; ++k)
      ok = spec <=
           pressure::phi_k(q, k, pressure::SearchMode::exhaustive).value +
               1e-8;
  }
  report(5, ok,
         "coherence bound <= spectral bound <= per-k pressure on 50 "
         "low-coherence frames (slack 1e-8)");
}

// 6. The two-point counterexample: an absolute-level certificate at gamma = 1
//    whose signed inner value is 0 must be recorded as a violated signed
//    claim, not raise an error.
void criterion_6() {
  bool ok = true;
  std::string note = "two-point counterexample reported as signed-check "
                     "violation (abs level 1, signed value 0)";
  try {
    pressure::PressureQuery q;
    q.set = PointSet({{1.0}, {-1.0}}, NormSpec::l2());
    q.base = {0.0};
    q.delta = 1.0;  // keeps the tuple at +-1 after normalization

    cert::DualCertificate claimed;
    claimed.f = {1.0};
    claimed.gamma = 1.0;
    claimed.scope = cert::CertScope::signed_claimed;
    const auto rep = cert::certificate_pipeline(
        q, {{2, {0, 1}}}, {{2, claimed}});
    ok = rep.entries.size() == 1;
    if (ok) {
      const auto& e = rep.entries[0];
      ok = e.verification.abs_level_ok && !e.verification.level_ok &&
           e.signed_value == 0.0 && !e.signed_claim_confirmed &&
           !rep.signed_claim_all_confirmed;
    }
  } catch (const Error& e) {
    ok = false;
    note = std::string("pipeline raised instead of reporting: ") + e.what();
  }
  report(6, ok, note);
}

// 7. Averaged iteration residuals never increase, sampled displacement never
//    exceeds the region diameter on orbit regions, and translation residuals
//    are a single repeated bit pattern.
void criterion_7() {
  bool mono_ok = true, lemma_ok = true, translation_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    SeededRng rng(7000 + trial);
    const std::size_t d = 1 + rng.below(4);
    const auto m = random_nonexpansive(rng, d);
    const Vector x0 = random_vec(rng, d, -2.0, 2.0);

    const auto avg = dyn::orbit(m, x0, 50, dyn::Scheme::krasnoselskii);
    for (std::size_t i = 1; i < avg.residuals.size() && mono_ok; ++i)
      mono_ok = avg.residuals[i] <= avg.residuals[i - 1] + 1e-10;

    // The sampled region is an orbit prefix, which the map sends into the
    // orbit's tail, so the displacement bound applies to it.
    const auto orb = dyn::orbit(m, x0, 6 + rng.below(6), dyn::Scheme::plain);
    const auto chk = dyn::displacement_diameter_check(
        m, PointSet(orb.iterates, m.ambient_norm));
    lemma_ok = lemma_ok && chk.lemma_5a_ok &&
               chk.delta_est <= chk.diam + 1e-9;

    const Vector b = random_vec(rng, d, -2.0, 2.0);
    const auto t = dyn::MapSpec::translation(b);
    const auto torb = dyn::orbit(t, x0, 10, dyn::Scheme::plain);
    const double nb = norm(b, NormSpec::l2());
    for (double res : torb.residuals)
      translation_ok = translation_ok && res == nb;
  }
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "100 seeded maps: residual monotonicity %s (tol 1e-10), "
                "displacement<=diameter %s, translation residuals exactly "
                "constant %s",
                mono_ok ? "ok" : "VIOLATED", lemma_ok ? "ok" : "VIOLATED",
                translation_ok ? "ok" : "VIOLATED");
  report(7, mono_ok && lemma_ok && translation_ok, detail);
}

// 8. Pressure values are invariant under translating and rescaling the input
//    geometry, to 1e-9, over 50 seeded transforms.
void criterion_8() {
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    SeededRng rng(8000 + trial);
    const std::size_t m = 2 + rng.below(4);  // 2..5
    const std::size_t d = 1 + rng.below(4);  // 1..4
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < m; ++i) pts.push_back(random_vec(rng, d));
    const Vector base = random_vec(rng, d);
    const NormSpec n = cycle_norm(trial);

    const double s = rng.uniform(0.3, 3.0);
    const Vector shift = random_vec(rng, d, -2.0, 2.0);
    std::vector<Vector> moved = pts;
    Vector moved_base = base;
    for (auto& p : moved)
      for (std::size_t j = 0; j < d; ++j) p[j] = s * p[j] + shift[j];
    for (std::size_t j = 0; j < d; ++j)
      moved_base[j] = s * moved_base[j] + shift[j];

    pressure::PressureQuery q1, q2;
    q1.set = PointSet(pts, n);
    q1.base = base;
    q1.k_max = m;
    q2.set = PointSet(moved, n);
    q2.base = moved_base;
    q2.k_max = m;
    const auto r1 = pressure::pressure_P(q1, pressure::Variant::signed_l1,
                                         pressure::SearchMode::exhaustive);
    const auto r2 = pressure::pressure_P(q2, pressure::Variant::signed_l1,
                                         pressure::SearchMode::exhaustive);
    for (std::size_t i = 0; i < m && ok; ++i) {
      const double gap = std::fabs(r1.per_k[i].value - r2.per_k[i].value);
      worst = std::max(worst, gap);
      ok = gap <= 1e-9;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "pressure invariant under 50 seeded translate/scale "
                "transforms (worst gap %.3g, tol 1e-9)",
                worst);
  report(8, ok, detail);
}

// 9. Structured replication output is byte-identical across runs.
void criterion_9() {
  const auto a = run_cli("replicate --all --format structured");
  const auto b = run_cli("replicate --all --format structured");
  const bool ok = a.exit_code == 0 && b.exit_code == 0 && !a.out.empty() &&
                  a.out == b.out;
  report(9, ok,
         "two structured replication runs are byte-identical");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%d/9 criteria passed\n", 9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
