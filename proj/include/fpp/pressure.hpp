// Inner l1-sphere / simplex norm minimization and the outer tuple suprema:
// phi_k, psi_k, the separation-aware variant, and their truncated infima.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fpp/vectorspace.hpp"

namespace fpp::pressure {

struct TooManyPoints : Error {
  using Error::Error;
};
struct BudgetExceeded : Error {
  using Error::Error;
};
struct MissingEta : Error {
  using Error::Error;
};

/// Inputs for one pressure computation. `delta` absent means "use the
/// pairwise diameter of set ∪ {base}"; zero resolved delta is degenerate.
struct PressureQuery {
  PointSet set;
  Vector base;
  std::optional<double> delta;
  std::size_t k_max = 1;
  std::optional<double> eta;       // separation fraction, in (0, 1]
  std::size_t search_budget = 200000;
  std::uint64_t seed = 0;
};

enum class InnerMode { signed_l1_sphere, unsigned_simplex };
enum class Exactness { exact, approximate };

struct InnerSolution {
  double value = 0.0;
  Vector coefficients;
  InnerMode mode = InnerMode::signed_l1_sphere;
  Exactness exactness = Exactness::exact;
};

enum class SignedMethod { exact_sign_patterns, subgradient, grid_oracle };
enum class SearchMode { exhaustive, search };
enum class Variant { signed_l1, unsigned_weights, separated };

enum class BoundKind { exact, lower_bound };

struct PerKRecord {
  std::size_t k = 0;
  double value = 0.0;
  std::vector<std::size_t> witness;  // indices into the query's point set
  BoundKind bound_kind = BoundKind::exact;
  bool admissible = true;            // false iff no tuple satisfied the constraints
};

struct PressureReport {
  std::vector<PerKRecord> per_k;
  double truncated_inf = 0.0;
  bool exact_zero_rule_applied = false;

  bool truncated_inf_exact() const;
};

struct HypothesisRecord {
  bool holds = true;
  std::optional<std::size_t> violator;  // index into the supplied tuples
  double min_value = 0.0;               // +inf sentinel when no tuples given
};

/// {(y_i - base)/delta} with the norm carried over.
PointSet normalize_points(const PointSet& set, const Vector& base,
                          double delta);

/// delta from the query: the provided value, else the pairwise diameter of
/// set ∪ {base}. Degenerate (<= 0) rejected with ZeroDelta.
double resolve_delta(const PressureQuery& q);

/// min ‖Σ a_i v_i‖ over ‖a‖₁ = 1. exact_sign_patterns decomposes by sign
/// vector (half of {±1}^k via a ↦ -a symmetry) into simplex subproblems and
/// is exact for L1/L2/Linf; grid_oracle enumerates the sphere at resolution
/// 1/grid_n per coordinate; subgradient is a seeded multistart heuristic.
/// Componentwise-equal or exactly-antipodal pairs short-circuit to an exact
/// zero with the (1/2, ∓1/2) witness.
InnerSolution inner_signed_min(const std::vector<Vector>& vs,
                               const NormSpec& n, SignedMethod method,
                               std::size_t grid_n = 200);

/// min ‖Σ w_i v_i‖ over the standard simplex — the min-norm point of the
/// hull. L2 via a Wolfe-style active-set solver (tol 1e-10, cap 10000);
/// L1/Linf via an exact LP reformulation; general Lp via conditional
/// gradient with grid validation, marked approximate.
InnerSolution inner_unsigned_min(const std::vector<Vector>& vs,
                                 const NormSpec& n);

/// ‖Σ coeffs_i vs_i‖ under n.
double evaluate_combination(const std::vector<Vector>& vs,
                            const Vector& coeffs, const NormSpec& n);

/// sup over k-tuples (repetition allowed) of the signed inner minimum on
/// normalized points. Exhaustive mode enumerates all C(m+k-1, k) multisets
/// when within budget; tuples with a repeated index contribute an exact zero
/// without solving. Search mode: seeded random restarts plus single-point
/// swap hill climbing; its result is a certified lower bound on the sup.
PerKRecord phi_k(const PressureQuery& q, std::size_t k, SearchMode mode);

/// Unsigned analogue over selections of k distinct indices. Repetition is
/// excluded here: a repeated point leaves the hull unchanged, so allowing it
/// would reduce every psi_k to the best single point. k > m yields value 0
/// with admissible = false (no selection exists).
PerKRecord psi_k(const PressureQuery& q, std::size_t k, SearchMode mode);

/// phi_k restricted to tuples with min pairwise distance >= eta * delta
/// (distinct indices; duplicates are never admissible for k >= 2). No
/// admissible tuple -> value 0 with admissible = false.
PerKRecord phi_k_separated(const PressureQuery& q, std::size_t k);

/// Per-k values for k = 1..k_max and their minimum. Signed variant over a
/// finite set of size m with k_max > m: entries for k > m are 0 exactly
/// (every tuple repeats a point; witness is the canonical all-zeros index
/// tuple) and exact_zero_rule_applied is set.
PressureReport pressure_P(const PressureQuery& q, Variant variant,
                          SearchMode mode = SearchMode::exhaustive);

/// holds iff the signed inner minimum of every supplied k-tuple of hull
/// points (normalized by the query's base/delta) is >= eps.
HypothesisRecord hypothesis_H_l1(const PressureQuery& q, double eps,
                                 std::size_t k,
                                 const std::vector<std::vector<Vector>>& tuples);

}  // namespace fpp::pressure
