#include "fpp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpp/rng.hpp"

namespace fpp::dyn {

namespace {

constexpr double kNonexpansiveTol = 1e-12;
constexpr std::size_t kCheckOrbitSteps = 32;

}  // namespace

MapSpec MapSpec::affine(Matrix A, Vector b, NormSpec n) {
  if (!A.is_square()) throw WrongShape("affine map needs a square matrix");
  if (A.rows != b.size())
    throw DimMismatch("offset dimension must match the matrix");
  if (b.empty()) throw EmptyInput("zero-dimensional map");
  for (double v : A.data)
    if (!std::isfinite(v)) throw NonFiniteInput("matrix entries must be finite");
  if (!all_finite(b)) throw NonFiniteInput("offset entries must be finite");
  MapSpec m;
  m.kind = Kind::affine;
  m.A = std::move(A);
  m.b = std::move(b);
  m.ambient_norm = n;
  return m;
}

MapSpec MapSpec::translation(Vector b, NormSpec n) {
  if (b.empty()) throw EmptyInput("zero-dimensional map");
  if (!all_finite(b)) throw NonFiniteInput("offset entries must be finite");
  MapSpec m;
  m.kind = Kind::translation;
  m.b = std::move(b);
  m.ambient_norm = n;
  return m;
}

bool is_nonexpansive(const MapSpec& m) {
  if (m.kind == MapSpec::Kind::translation) return true;
  return operator_norm(m.A, m.ambient_norm) <= 1.0 + kNonexpansiveTol;
}

Vector apply(const MapSpec& m, const Vector& x) {
  if (x.size() != m.dim()) throw DimMismatch("point dimension mismatch");
  if (m.kind == MapSpec::Kind::translation) return vec_add(x, m.b);
  return vec_add(mat_vec(m.A, x), m.b);
}

Vector fixed_point_affine(const MapSpec& m) {
  if (m.kind != MapSpec::Kind::affine)
    throw SingularSystem("translations have no fixed point");
  const std::size_t d = m.dim();
  Matrix M(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      M.at(i, j) = (i == j ? 1.0 : 0.0) - m.A.at(i, j);
  Vector x;
  try {
    x = gaussian_solve(M, m.b);
  } catch (const SingularMatrix&) {
    throw SingularSystem("I - A is singular; no unique fixed point");
  }
  const double resid = distance(dyn::apply(m, x), x, m.ambient_norm);
  if (resid > 1e-9 * (1.0 + norm(m.b, m.ambient_norm)))
    throw SingularSystem("fixed-point solve is numerically unreliable");
  return x;
}

OrbitRecord orbit(const MapSpec& m, const Vector& x0, std::size_t steps,
                  Scheme scheme) {
  if (x0.size() != m.dim()) throw DimMismatch("start dimension mismatch");
  OrbitRecord rec;
  rec.scheme = scheme;
  rec.iterates.reserve(steps + 1);
  rec.residuals.reserve(steps + 1);
  // A translation displaces every point by exactly b; computing the residual
  // per iterate would smear that constant across one ulp of cancellation.
  const bool is_translation = m.kind == MapSpec::Kind::translation;
  const double translation_residual =
      is_translation ? norm(m.b, m.ambient_norm) : 0.0;
  Vector x = x0;
  for (std::size_t n = 0; n <= steps; ++n) {
    const Vector tx = dyn::apply(m, x);
    rec.iterates.push_back(x);
    rec.residuals.push_back(is_translation ? translation_residual
                                           : distance(x, tx, m.ambient_norm));
    if (n == steps) break;
    if (scheme == Scheme::plain) {
      x = tx;
    } else {
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = 0.5 * (x[j] + tx[j]);
    }
  }
  rec.hull_diameter =
      pairwise_diameter(PointSet(rec.iterates, m.ambient_norm));
  rec.displacement_estimate =
      *std::min_element(rec.residuals.begin(), rec.residuals.end());
  return rec;
}

double minimal_displacement(const MapSpec& m,
                            const std::vector<Vector>& region_samples) {
  if (region_samples.empty()) throw EmptyInput("need at least one sample");
  if (m.kind == MapSpec::Kind::translation)
    return norm(m.b, m.ambient_norm);  // ||x - Tx|| is constant
  Vector fixed;
  bool have_fixed = false;
  try {
    fixed = fixed_point_affine(m);
    have_fixed = true;
  } catch (const SingularSystem&) {
  }
  if (have_fixed) {
    const std::size_t d = m.dim();
    bool inside = true;
    for (std::size_t j = 0; j < d && inside; ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& s : region_samples) {
        if (s.size() != d) throw DimMismatch("sample dimension mismatch");
        lo = std::min(lo, s[j]);
        hi = std::max(hi, s[j]);
      }
      inside = fixed[j] >= lo && fixed[j] <= hi;
    }
    if (inside) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : region_samples)
    best = std::min(best, distance(s, dyn::apply(m, s), m.ambient_norm));
  return best;
}

DisplacementCheck displacement_diameter_check(const MapSpec& m,
                                              const PointSet& region) {
  DisplacementCheck chk;
  chk.delta_est = minimal_displacement(m, region.points);
  chk.diam = pairwise_diameter(region);
  chk.lemma_5a_ok = chk.delta_est <= chk.diam + 1e-9;
  chk.lemma_5b_ok = true;
  for (const auto& start : region.points) {
    const OrbitRecord rec = orbit(m, start, kCheckOrbitSteps, Scheme::plain);
    if (chk.delta_est > 2.0 * rec.hull_diameter + 1e-9) {
      chk.lemma_5b_ok = false;
      break;
    }
  }
  return chk;
}

std::vector<Vector> sample_hull(const PointSet& generators, std::size_t count,
                                std::uint64_t seed) {
  SeededRng rng(seed);
  const std::size_t g = generators.size(), d = generators.dim;
  std::vector<Vector> out;
  out.reserve(count);
  Vector w(g);
  for (std::size_t s = 0; s < count; ++s) {
    double sum = 0.0;
    for (auto& wi : w) {
      wi = rng.exponential();
      sum += wi;
    }
    Vector p(d, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
      const double wi = w[i] / sum;
      for (std::size_t j = 0; j < d; ++j) p[j] += wi * generators.points[i][j];
    }
    out.push_back(std::move(p));
  }
  return out;
}

ConvexityCheck two_point_convexity_check(const Vector& u1, const Vector& u2,
                                         double lambda) {
  if (u1.size() != u2.size()) throw DimMismatch("point dimension mismatch");
  const NormSpec n = NormSpec::l2();
  if (norm(u1, n) > 1.0 + 1e-12 || norm(u2, n) > 1.0 + 1e-12)
    throw NotUnitBall("points must lie in the closed unit ball");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw OutOfRange("lambda must lie in [0, 1]");
  ConvexityCheck chk;
  Vector comb(u1.size());
  for (std::size_t j = 0; j < u1.size(); ++j)
    comb[j] = lambda * u1[j] + (1.0 - lambda) * u2[j];
  chk.combination_norm = norm(comb, n);
  chk.gap = distance(u1, u2, n);
  chk.bound = 1.0 - modulus_convexity_l2(std::min(chk.gap, 2.0));
  chk.asserted = lambda == 0.5;  // the modulus bound is exactly the midpoint case
  if (chk.asserted) chk.satisfied = chk.combination_norm <= chk.bound + 1e-12;
  return chk;
}

}  // namespace fpp::dyn
