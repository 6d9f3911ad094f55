#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "fpp/certificates.hpp"
#include "fpp/pressure.hpp"
#include "fpp/rng.hpp"

using namespace fpp;
using namespace fpp::cert;

namespace {

Vector random_vec(SeededRng& rng, std::size_t d, double lo = -2.0,
                  double hi = 2.0) {
  Vector v(d);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

std::vector<Vector> scaled_basis(std::size_t m, double s) {
  std::vector<Vector> vs(m, Vector(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) vs[i][i] = s;
  return vs;
}

}  // namespace

TEST_CASE("euclidean certificate on an orthonormal triple") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto vs = scaled_basis(3, r);
  const auto c = solve_certificate(vs, NormSpec::l2());
  CHECK(c.gamma == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-10));
  // Optimal functional points along the diagonal.
  const double comp = 1.0 / std::sqrt(3.0);
  for (double fi : c.f) CHECK(fi == doctest::Approx(comp).epsilon(1e-7));
  CHECK(norm(c.f, NormSpec::l2()) <= 1.0 + 1e-9);
  CHECK(c.scope == CertScope::unsigned_valid);

  const auto v = verify_certificate(c, vs);
  CHECK(v.dual_norm_ok);
  CHECK(v.level_ok);
  CHECK(v.abs_level_ok);
  CHECK(cert_bound_unsigned(c, vs) == doctest::Approx(c.gamma));
}

TEST_CASE("euclidean certificate level equals the min-norm value") {
  // Strong duality: max level over the unit ball = distance from the origin
  // to the hull. The right side has an independent solver.
  SeededRng rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 1 + rng.below(6), d = 1 + rng.below(6);
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < m; ++i) vs.push_back(random_vec(rng, d));
    const auto c = solve_certificate(vs, NormSpec::l2());
    const double mn = pressure::inner_unsigned_min(vs, NormSpec::l2()).value;
    CHECK(std::fabs(c.gamma - mn) <= 1e-8);
    const auto v = verify_certificate(c, vs);
    CHECK(v.dual_norm_ok);
    CHECK(v.level_ok);
  }
}

TEST_CASE("hull containing the origin yields the zero certificate") {
  const std::vector<Vector> vs = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}};
  const auto c = solve_certificate(vs, NormSpec::l2());
  CHECK(c.gamma == 0.0);
  for (double fi : c.f) CHECK(fi == 0.0);
  const auto v = verify_certificate(c, vs);
  CHECK(v.dual_norm_ok);
  CHECK(v.level_ok);  // trivially: f(v_i) = 0 >= 0
}

TEST_CASE("polyhedral certificates match the primal minimum under L1/Linf") {
  SeededRng rng(62);
  for (const auto& n : {NormSpec::l1(), NormSpec::linf()}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t m = 1 + rng.below(5), d = 1 + rng.below(4);
      std::vector<Vector> vs;
      for (std::size_t i = 0; i < m; ++i) vs.push_back(random_vec(rng, d));
      const auto c = solve_certificate(vs, n);
      CHECK(c.norm_of_f == dual_norm_spec(n));
      const double mn = pressure::inner_unsigned_min(vs, n).value;
      CHECK(std::fabs(c.gamma - mn) <= 1e-7);
      const auto v = verify_certificate(c, vs);
      CHECK(v.dual_norm_ok);
      CHECK(v.level_ok);
    }
  }
}

TEST_CASE("hand certificates under the polyhedral norms") {
  // L1 points e1, e2: f = (1,1) has Linf norm 1 and level 1.
  const std::vector<Vector> b2 = scaled_basis(2, 1.0);
  const auto c1 = solve_certificate(b2, NormSpec::l1());
  CHECK(c1.gamma == doctest::Approx(1.0).epsilon(1e-9));
  const auto cinf = solve_certificate(b2, NormSpec::linf());
  CHECK(cinf.gamma == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(solve_certificate(b2, NormSpec::lp(3.0)), UnsupportedNorm);
}

TEST_CASE("verification flags an inflated functional") {
  const auto vs = scaled_basis(2, 1.0);
  auto c = solve_certificate(vs, NormSpec::l2());
  for (auto& fi : c.f) fi *= 1.1;  // breaks the dual-ball constraint
  c.gamma *= 1.1;
  const auto v = verify_certificate(c, vs);
  CHECK_FALSE(v.dual_norm_ok);
  CHECK_THROWS_AS(cert_bound_unsigned(c, vs), InvalidCertificate);
}

TEST_CASE("verification dimension mismatch is rejected") {
  DualCertificate c;
  c.f = {1.0, 0.0};
  CHECK_THROWS_AS(verify_certificate(c, {{1.0, 0.0, 0.0}}), DimMismatch);
}

TEST_CASE("two-point antipodal pair: abs level holds, signed claim fails") {
  // f = u certifies |f(v_i)| = 1 on {u, -u}, but the signed combination
  // (1/2, 1/2) collapses to zero, so the level cannot transfer to signs.
  const std::vector<Vector> pair = {{1.0}, {-1.0}};
  const auto c = solve_certificate(pair, NormSpec::l2());
  CHECK(c.gamma == 0.0);  // honest unsigned level: the hull contains 0

  DualCertificate claimed;
  claimed.f = {1.0};
  claimed.gamma = 1.0;
  claimed.scope = CertScope::signed_claimed;
  const auto v = verify_certificate(claimed, pair);
  CHECK(v.dual_norm_ok);
  CHECK(v.abs_level_ok);
  CHECK_FALSE(v.level_ok);  // f(-u) = -1 < 1

  const double signed_min =
      pressure::inner_signed_min(pair, NormSpec::l2(),
                                 pressure::SignedMethod::exact_sign_patterns)
          .value;
  CHECK(signed_min == 0.0);
  CHECK(signed_min < claimed.gamma);  // the claimed transfer is false
}

TEST_CASE("mutual coherence: hand values and guards") {
  const PointSet ortho(scaled_basis(3, 1.0), NormSpec::l2());
  CHECK(mutual_coherence(ortho) == 0.0);

  const PointSet pair({{1.0, 0.0}, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}},
                      NormSpec::l2());
  CHECK(mutual_coherence(pair) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // Sign of the inner product does not matter.
  const PointSet anti({{1.0, 0.0}, {-1.0, 0.1}}, NormSpec::l2());
  const PointSet plus({{1.0, 0.0}, {1.0, 0.1}}, NormSpec::l2());
  CHECK(mutual_coherence(anti) == doctest::Approx(mutual_coherence(plus)));

  CHECK_THROWS_AS(mutual_coherence(PointSet({{1.0}}, NormSpec::l2())),
                  TooFewPoints);
  CHECK_THROWS_AS(
      mutual_coherence(PointSet({{1.0}, {0.0}}, NormSpec::l2())), ZeroVector);
  CHECK_THROWS_AS(
      mutual_coherence(PointSet({{1.0}, {2.0}}, NormSpec::l1())),
      NonEuclideanNorm);
}

TEST_CASE("coherence lower bound formula and clamping") {
  // mu = 0: bound is 1/sqrt(2m).
  for (std::size_t m = 2; m <= 6; ++m) {
    const auto rep = coherence_phi_lower(m, 0.0);
    CHECK(rep.phi_lower ==
          doctest::Approx(1.0 / std::sqrt(2.0 * static_cast<double>(m))));
    CHECK_FALSE(rep.clamped);
    CHECK(rep.m == m);
  }
  // Closed form for general mu.
  SeededRng rng(63);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + rng.below(5);
    const double mu = rng.uniform01() * 0.99;
    const auto rep = coherence_phi_lower(m, mu);
    const double head = 1.0 - (static_cast<double>(m) - 1.0) * mu;
    if (head <= 0.0) {
      CHECK(rep.clamped);
      CHECK(rep.phi_lower == 0.0);
    } else {
      CHECK_FALSE(rep.clamped);
      CHECK(rep.phi_lower ==
            doctest::Approx(std::sqrt(head) /
                            (std::sqrt(static_cast<double>(m)) *
                             std::sqrt(2.0 * (1.0 + mu)))));
    }
  }
  CHECK(coherence_phi_lower(5, 0.3).clamped);  // head = 1 - 4*0.3 <= 0
  // A singleton has no pairs, so mu = 0 and the bound reduces to 1/sqrt(2).
  CHECK(coherence_phi_lower(1, 0.0).phi_lower ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(coherence_phi_lower(0, 0.0), OutOfRange);
  CHECK_THROWS_AS(coherence_phi_lower(3, -0.1), OutOfRange);
  CHECK_THROWS_AS(coherence_phi_lower(3, 1.1), OutOfRange);
}

TEST_CASE("spectral lower bound: orthonormal frames and degenerate sets") {
  for (std::size_t m = 1; m <= 5; ++m) {
    const PointSet ps(scaled_basis(m, 1.0), NormSpec::l2());
    CHECK(spectral_phi_lower(ps, std::sqrt(2.0)) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * static_cast<double>(m)))
              .epsilon(1e-9));
  }
  // Repeated point: singular Gram, bound collapses to zero.
  const PointSet dup({{1.0, 0.0}, {1.0, 0.0}}, NormSpec::l2());
  CHECK(spectral_phi_lower(dup, 1.0) == 0.0);

  // Two unit vectors at 60 degrees: lambda_min = 1 - cos(60) = 0.5,
  // so the bound is sqrt(0.5) / (sqrt(2) * delta).
  const PointSet sixty({{1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}},
                       NormSpec::l2());
  CHECK(spectral_phi_lower(sixty, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS(spectral_phi_lower(dup, 0.0), ZeroDelta);
  CHECK_THROWS_AS(
      spectral_phi_lower(PointSet({{1.0}}, NormSpec::linf()), 1.0),
      NonEuclideanNorm);
}

TEST_CASE("spectral bound matches a closed-form 2x2 eigenvalue") {
  SeededRng rng(64);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 2 + rng.below(3);
    const Vector v1 = random_vec(rng, d), v2 = random_vec(rng, d);
    const PointSet ps({v1, v2}, NormSpec::l2());
    const Matrix G(2, 2,
                   {dot(v1, v1), dot(v1, v2), dot(v1, v2), dot(v2, v2)});
    const auto [hi, lo] = sym_eigen_2x2(G);
    (void)hi;
    const double delta = 1.7;
    const double expect =
        lo <= 1e-12 ? 0.0 : std::sqrt(lo) / (std::sqrt(2.0) * delta);
    CHECK(spectral_phi_lower(ps, delta) ==
          doctest::Approx(expect).epsilon(1e-7));
  }
}

TEST_CASE("bound chain: coherence <= spectral <= exhaustive per-k values") {
  SeededRng rng(65);
  int accepted = 0;
  while (accepted < 15) {
    const std::size_t m = 2 + rng.below(3);
    const std::size_t d = m + rng.below(3);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < m; ++i) {
      Vector v = random_vec(rng, d, -1.0, 1.0);
      const double nv = norm(v, NormSpec::l2());
      if (nv < 1e-6) continue;
      for (auto& x : v) x /= nv;  // unit frame vectors
      pts.push_back(v);
    }
    if (pts.size() < m) continue;
    const PointSet ps(pts, NormSpec::l2());
    const double mu = mutual_coherence(ps);
    if (mu >= 1.0 / (static_cast<double>(m) - 1.0)) continue;  // low-coherence only
    ++accepted;

    pressure::PressureQuery q;
    q.set = ps;
    q.base = Vector(d, 0.0);
    const double delta = pressure::resolve_delta(q);

    const double coh = coherence_phi_lower(m, mu).phi_lower;
    const double spec = spectral_phi_lower(ps, delta);
    CHECK(coh <= spec + 1e-10);
    for (std::size_t k = 1; k <= m; ++k) {
      const double phi =
          pressure::phi_k(q, k, pressure::SearchMode::exhaustive).value;
      CHECK(spec <= phi + 1e-8);
    }
  }
}

TEST_CASE("pipeline verifies per-k certificates and the signed claim") {
  pressure::PressureQuery q;
  q.set = PointSet(scaled_basis(3, 1.0), NormSpec::l2());
  q.base = {0.0, 0.0, 0.0};
  q.delta = std::sqrt(2.0);

  const double r = 1.0 / std::sqrt(2.0);
  std::map<std::size_t, std::vector<std::size_t>> tuples = {
      {1, {0}}, {2, {0, 1}}, {3, {0, 1, 2}}};
  std::map<std::size_t, DualCertificate> certs;
  for (const auto& [k, idx] : tuples) {
    std::vector<Vector> sel;
    for (auto i : idx) sel.push_back(Vector{i == 0 ? r : 0.0, i == 1 ? r : 0.0,
                                            i == 2 ? r : 0.0});
    certs[k] = solve_certificate(sel, NormSpec::l2());
  }

  const auto rep = certificate_pipeline(q, tuples, certs);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.entries[0].k == 1);
  CHECK(rep.entries[2].gamma ==
        doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-9));
  CHECK(rep.min_gamma == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-9));
  for (const auto& e : rep.entries) {
    CHECK(e.verification.dual_norm_ok);
    CHECK(e.verification.level_ok);
    CHECK(e.signed_claim_confirmed);
    CHECK(e.unsigned_value >= e.gamma - 1e-9);
  }
  CHECK(rep.signed_claim_all_confirmed);
}

TEST_CASE("pipeline records a failed signed claim without failing") {
  // delta pinned to 1 so the tuple stays at +-1 after normalization.
  pressure::PressureQuery q;
  q.set = PointSet({{1.0}, {-1.0}}, NormSpec::l2());
  q.base = {0.0};
  q.delta = 1.0;

  std::map<std::size_t, std::vector<std::size_t>> tuples = {{2, {0, 1}}};
  DualCertificate claimed;
  claimed.f = {1.0};
  claimed.gamma = 1.0;
  claimed.scope = CertScope::signed_claimed;
  std::map<std::size_t, DualCertificate> certs = {{2, claimed}};

  const auto rep = certificate_pipeline(q, tuples, certs);
  REQUIRE(rep.entries.size() == 1);
  const auto& e = rep.entries[0];
  CHECK(e.verification.abs_level_ok);
  CHECK_FALSE(e.verification.level_ok);
  CHECK(e.signed_value == 0.0);
  CHECK_FALSE(e.signed_claim_confirmed);
  CHECK_FALSE(rep.signed_claim_all_confirmed);
}

TEST_CASE("pipeline input validation") {
  pressure::PressureQuery q;
  q.set = PointSet(scaled_basis(2, 1.0), NormSpec::l2());
  q.base = {0.0, 0.0};

  DualCertificate c;
  c.f = {1.0, 0.0};
  // Certificate for a k with no tuple.
  CHECK_THROWS_AS(
      certificate_pipeline(q, {}, {{1, c}}), OutOfRange);
  // Tuple arity differs from k.
  CHECK_THROWS_AS(
      certificate_pipeline(q, {{2, {0}}}, {{2, c}}), LengthMismatch);
  // Index out of range.
  CHECK_THROWS_AS(
      certificate_pipeline(q, {{1, {7}}}, {{1, c}}), OutOfRange);
}
