// Dense small-scale vector/matrix numerics: norms, Gram matrices, symmetric
// eigenvalues, power iteration, linear solves, quadrature, diameters.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fpp {

/// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteInput : Error {
  using Error::Error;
};
struct DimMismatch : Error {
  using Error::Error;
};
struct EmptyInput : Error {
  using Error::Error;
};
struct NonEuclideanNorm : Error {
  using Error::Error;
};
struct NotSymmetric : Error {
  using Error::Error;
};
struct WrongShape : Error {
  using Error::Error;
};
struct SingularMatrix : Error {
  using Error::Error;
};
struct BadSampleCount : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};
struct UnsupportedNorm : Error {
  using Error::Error;
};
struct ZeroDelta : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};

using Vector = std::vector<double>;

/// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> entries);

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static Matrix identity(std::size_t n);
  bool is_square() const { return rows == cols; }
};

/// Which norm governs lengths; Lp carries its exponent p in (1, inf).
struct NormSpec {
  enum class Kind { L1, L2, Linf, Lp };
  Kind kind = Kind::L2;
  double p = 2.0;  // only meaningful for Kind::Lp

  static NormSpec l1() { return {Kind::L1, 1.0}; }
  static NormSpec l2() { return {Kind::L2, 2.0}; }
  static NormSpec linf() { return {Kind::Linf, 0.0}; }
  static NormSpec lp(double p);

  bool operator==(const NormSpec& o) const;
};

/// A finite list of dim-d points with an attached norm.
struct PointSet {
  std::size_t dim = 0;
  std::vector<Vector> points;
  NormSpec norm;

  PointSet() = default;
  PointSet(std::vector<Vector> pts, NormSpec n);

  std::size_t size() const { return points.size(); }
};

// Elementwise vector helpers shared across modules.
Vector vec_add(const Vector& a, const Vector& b);
Vector vec_sub(const Vector& a, const Vector& b);
Vector vec_scale(double s, const Vector& a);
double dot(const Vector& a, const Vector& b);
bool all_finite(const Vector& v);

Vector mat_vec(const Matrix& A, const Vector& x);
Matrix mat_mul(const Matrix& A, const Matrix& B);
Matrix transpose_times_self(const Matrix& A);  // A^T A

/// ||v|| under the given norm; rejects non-finite entries.
double norm(const Vector& v, const NormSpec& n);

/// Distance ||a - b|| under n.
double distance(const Vector& a, const Vector& b, const NormSpec& n);

/// L1 <-> Linf, L2 <-> L2, Lp <-> Lq with 1/p + 1/q = 1.
NormSpec dual_norm_spec(const NormSpec& n);

/// Symmetric m x m matrix of pairwise inner products. Requires an L2 set.
Matrix gram(const PointSet& ps);

/// Eigenvalues of a symmetric 2x2 matrix via the closed quadratic formula,
/// returned in descending order.
std::pair<double, double> sym_eigen_2x2(const Matrix& M);

struct PowerIterationResult {
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Dominant eigenvalue of a symmetric PSD matrix. The start vector is a
/// deterministic pseudo-random function of the seed; convergence requires the
/// Rayleigh quotient's relative change to stay below tol for 3 consecutive
/// iterations. Non-convergence is reported through the flag, not thrown.
PowerIterationResult power_iteration(const Matrix& M, double tol,
                                     std::size_t max_iter, std::uint64_t seed);

/// Smallest eigenvalue of a symmetric PSD matrix via inverse power iteration
/// (shift 0). A singular matrix reports 0.
PowerIterationResult inverse_power_iteration_min(const Matrix& M, double tol,
                                                 std::size_t max_iter,
                                                 std::uint64_t seed);

/// Induced operator norm: max abs column sum (L1), max abs row sum (Linf),
/// largest singular value (L2). General Lp is rejected.
double operator_norm(const Matrix& A, const NormSpec& n);

/// Solve A x = b by Gaussian elimination with partial pivoting. A pivot below
/// 1e-12 * max|entry| raises SingularMatrix.
Vector gaussian_solve(const Matrix& A, const Vector& b);

/// Composite Simpson rule over uniformly spaced samples (odd count >= 3).
double simpson(const std::vector<double>& values, double h);

/// Max over pairs of ||p_i - p_j|| under the set's norm; 0 for a singleton.
double pairwise_diameter(const PointSet& ps);

/// Euclidean plane modulus of convexity: 1 - sqrt(1 - eps^2/4), eps in [0,2].
double modulus_convexity_l2(double eps);

}  // namespace fpp
