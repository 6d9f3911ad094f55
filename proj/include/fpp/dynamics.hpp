#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fpp/vectorspace.hpp"

namespace fpp::dyn {

struct SingularSystem : Error {
  using Error::Error;
};
struct NotUnitBall : Error {
  using Error::Error;
};

// x -> Ax + b, or the translation x -> x + b.  Build through the factories,
// which validate shapes.
struct MapSpec {
  enum class Kind { affine, translation };
  Kind kind = Kind::translation;
  Matrix A;  // affine only
  Vector b;
  NormSpec ambient_norm = NormSpec::l2();

  static MapSpec affine(Matrix A, Vector b, NormSpec n = NormSpec::l2());
  static MapSpec translation(Vector b, NormSpec n = NormSpec::l2());

  std::size_t dim() const { return b.size(); }
};

// Translations are isometries; an affine map is nonexpansive exactly when
// its linear part has operator norm <= 1 (tolerance 1e-12).
bool is_nonexpansive(const MapSpec& m);

enum class Scheme { plain, krasnoselskii };

struct OrbitRecord {
  std::vector<Vector> iterates;  // steps + 1 entries, starting at x0
  std::vector<double> residuals;  // ||x_n - T x_n|| per iterate
  double hull_diameter = 0.0;
  double displacement_estimate = 0.0;  // min residual along the orbit
  Scheme scheme = Scheme::plain;
};

struct DisplacementCheck {
  double delta_est = 0.0;
  double diam = 0.0;
  bool lemma_5a_ok = false;  // delta <= diam(region)
  bool lemma_5b_ok = false;  // delta <= 2 * orbit hull diameter, every start
};

struct ConvexityCheck {
  double combination_norm = 0.0;  // ||lambda u1 + (1 - lambda) u2||
  double gap = 0.0;               // separation ||u1 - u2||
  double bound = 0.0;             // 1 - modulus(gap)
  bool asserted = false;          // only the midpoint case carries a guarantee
  std::optional<bool> satisfied;  // set when asserted
};

Vector apply(const MapSpec& m, const Vector& x);

// Solves (I - A) x = b.
Vector fixed_point_affine(const MapSpec& m);

OrbitRecord orbit(const MapSpec& m, const Vector& x0, std::size_t steps,
                  Scheme scheme);

// min ||x - Tx|| over the samples, with exact shortcuts: translations give
// ||b||, and an affine map whose fixed point lies in the samples' bounding
// box gives 0.
double minimal_displacement(const MapSpec& m,
                            const std::vector<Vector>& region_samples);

DisplacementCheck displacement_diameter_check(const MapSpec& m,
                                              const PointSet& region);

// Convex combinations of the generators with symmetric Dirichlet(1) weights
// (normalized exponentials of one seeded stream).
std::vector<Vector> sample_hull(const PointSet& generators, std::size_t count,
                                std::uint64_t seed);

ConvexityCheck two_point_convexity_check(const Vector& u1, const Vector& u2,
                                         double lambda);

}  // namespace fpp::dyn
