#include "fpp/vectorspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpp/rng.hpp"

namespace fpp {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> entries)
    : rows(r), cols(c), data(std::move(entries)) {
  if (data.size() != rows * cols)
    throw WrongShape("matrix entry count does not match rows*cols");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I.at(i, i) = 1.0;
  return I;
}

NormSpec NormSpec::lp(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw OutOfRange("Lp norm requires finite p > 1");
  return {Kind::Lp, p};
}

bool NormSpec::operator==(const NormSpec& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::Lp) return p == o.p;
  return true;
}

PointSet::PointSet(std::vector<Vector> pts, NormSpec n)
    : points(std::move(pts)), norm(n) {
  if (points.empty()) throw EmptyInput("point set must be nonempty");
  dim = points.front().size();
  for (const auto& pt : points) {
    if (pt.size() != dim)
      throw DimMismatch("all points must share one dimension");
    if (!all_finite(pt)) throw NonFiniteInput("point has non-finite entry");
  }
}

bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

Vector vec_add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimMismatch("vector sizes differ");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector vec_sub(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimMismatch("vector sizes differ");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector vec_scale(double s, const Vector& a) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimMismatch("vector sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vector mat_vec(const Matrix& A, const Vector& x) {
  if (A.cols != x.size()) throw DimMismatch("matrix/vector shapes differ");
  Vector y(A.rows, 0.0);
  for (std::size_t i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < A.cols; ++j) s += A.at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix mat_mul(const Matrix& A, const Matrix& B) {
  if (A.cols != B.rows) throw DimMismatch("matrix shapes differ");
  Matrix C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      const double aik = A.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < B.cols; ++j)
        C.at(i, j) += aik * B.at(k, j);
    }
  return C;
}

Matrix transpose_times_self(const Matrix& A) {
  Matrix G(A.cols, A.cols);
  for (std::size_t i = 0; i < A.cols; ++i)
    for (std::size_t j = i; j < A.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < A.rows; ++k) s += A.at(k, i) * A.at(k, j);
      G.at(i, j) = s;
      G.at(j, i) = s;
    }
  return G;
}

double norm(const Vector& v, const NormSpec& n) {
  if (!all_finite(v)) throw NonFiniteInput("vector has non-finite entry");
  switch (n.kind) {
    case NormSpec::Kind::L1: {
      double s = 0.0;
      for (double x : v) s += std::fabs(x);
      return s;
    }
    case NormSpec::Kind::L2: {
      double s = 0.0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
    case NormSpec::Kind::Linf: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::fabs(x));
      return m;
    }
    case NormSpec::Kind::Lp: {
      // Scale out the max magnitude so the powers cannot overflow.
      double m = 0.0;
      for (double x : v) m = std::max(m, std::fabs(x));
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (double x : v) s += std::pow(std::fabs(x) / m, n.p);
      return m * std::pow(s, 1.0 / n.p);
    }
  }
  throw Error("unreachable norm kind");
}

double distance(const Vector& a, const Vector& b, const NormSpec& n) {
  return norm(vec_sub(a, b), n);
}

NormSpec dual_norm_spec(const NormSpec& n) {
  switch (n.kind) {
    case NormSpec::Kind::L1:
      return NormSpec::linf();
    case NormSpec::Kind::Linf:
      return NormSpec::l1();
    case NormSpec::Kind::L2:
      return NormSpec::l2();
    case NormSpec::Kind::Lp:
      return NormSpec::lp(n.p / (n.p - 1.0));
  }
  throw Error("unreachable norm kind");
}

Matrix gram(const PointSet& ps) {
  if (ps.norm.kind != NormSpec::Kind::L2)
    throw NonEuclideanNorm("Gram matrix requires the L2 norm");
  const std::size_t m = ps.size();
  Matrix G(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const double s = dot(ps.points[i], ps.points[j]);
      G.at(i, j) = s;
      G.at(j, i) = s;
    }
  return G;
}

std::pair<double, double> sym_eigen_2x2(const Matrix& M) {
  if (!M.is_square() || M.rows != 2)
    throw WrongShape("expected a 2x2 matrix");
  const double a = M.at(0, 0), b = M.at(0, 1), b2 = M.at(1, 0),
               c = M.at(1, 1);
  const double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(c), 1.0});
  if (std::fabs(b - b2) > 1e-12 * scale)
    throw NotSymmetric("matrix is not symmetric");
  const double half_tr = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {half_tr + disc, half_tr - disc};
}

namespace {

void check_symmetric(const Matrix& M) {
  if (!M.is_square()) throw WrongShape("expected a square matrix");
  double scale = 1.0;
  for (double x : M.data) scale = std::max(scale, std::fabs(x));
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t j = i + 1; j < M.cols; ++j)
      if (std::fabs(M.at(i, j) - M.at(j, i)) > 1e-12 * scale)
        throw NotSymmetric("matrix is not symmetric");
}

Vector seeded_start(std::size_t n, std::uint64_t seed) {
  SeededRng rng(seed);
  Vector v(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = rng.uniform(-1.0, 1.0);
    s += v[i] * v[i];
  }
  if (s == 0.0) v[0] = 1.0;
  return v;
}

void normalize_l2(Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  const double r = std::sqrt(s);
  if (r > 0.0)
    for (double& x : v) x /= r;
}

}  // namespace

PowerIterationResult power_iteration(const Matrix& M, double tol,
                                     std::size_t max_iter,
                                     std::uint64_t seed) {
  check_symmetric(M);
  const std::size_t n = M.rows;
  Vector v = seeded_start(n, seed);
  normalize_l2(v);

  PowerIterationResult res;
  double prev = std::numeric_limits<double>::quiet_NaN();
  std::size_t steady = 0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vector w = mat_vec(M, v);
    const double rayleigh = dot(v, w);
    res.iterations = it;
    res.value = rayleigh;
    if (std::isfinite(prev)) {
      const double denom = std::max(std::fabs(rayleigh), 1e-300);
      if (std::fabs(rayleigh - prev) / denom < tol)
        ++steady;
      else
        steady = 0;
      if (steady >= 3) {
        res.converged = true;
        return res;
      }
    }
    prev = rayleigh;
    double wn = 0.0;
    for (double x : w) wn += x * x;
    if (wn == 0.0) {
      // M v = 0: v is an exact null vector, quotient 0 is exact.
      res.value = 0.0;
      res.converged = true;
      return res;
    }
    normalize_l2(w);
    v = std::move(w);
  }
  return res;
}

PowerIterationResult inverse_power_iteration_min(const Matrix& M, double tol,
                                                 std::size_t max_iter,
                                                 std::uint64_t seed) {
  check_symmetric(M);
  const std::size_t n = M.rows;
  Vector v = seeded_start(n, seed);
  normalize_l2(v);

  PowerIterationResult res;
  double prev = std::numeric_limits<double>::quiet_NaN();
  std::size_t steady = 0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vector w = gaussian_solve(M, v);  // may throw SingularMatrix
    Vector mv = mat_vec(M, v);
    const double rayleigh = dot(v, mv);
    res.iterations = it;
    res.value = rayleigh;
    if (std::isfinite(prev)) {
      const double denom = std::max(std::fabs(rayleigh), 1e-300);
      if (std::fabs(rayleigh - prev) / denom < tol)
        ++steady;
      else
        steady = 0;
      if (steady >= 3) {
        res.converged = true;
        return res;
      }
    }
    prev = rayleigh;
    normalize_l2(w);
    v = std::move(w);
  }
  return res;
}

double operator_norm(const Matrix& A, const NormSpec& n) {
  if (A.rows == 0 || A.cols == 0) throw EmptyInput("empty matrix");
  switch (n.kind) {
    case NormSpec::Kind::L1: {
      double best = 0.0;
      for (std::size_t j = 0; j < A.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < A.rows; ++i) s += std::fabs(A.at(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormSpec::Kind::Linf: {
      double best = 0.0;
      for (std::size_t i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols; ++j) s += std::fabs(A.at(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormSpec::Kind::L2: {
      const Matrix G = transpose_times_self(A);
      if (G.rows == 1) return std::sqrt(std::max(0.0, G.at(0, 0)));
      if (G.rows == 2) {
        const auto [lmax, lmin] = sym_eigen_2x2(G);
        (void)lmin;
        return std::sqrt(std::max(0.0, lmax));
      }
      const auto pi = power_iteration(G, 1e-12, 10000, 0x5eedu);
      return std::sqrt(std::max(0.0, pi.value));
    }
    case NormSpec::Kind::Lp:
      throw UnsupportedNorm("operator norm is not available for general Lp");
  }
  throw Error("unreachable norm kind");
}

Vector gaussian_solve(const Matrix& A, const Vector& b) {
  if (!A.is_square()) throw WrongShape("expected a square matrix");
  if (A.rows != b.size()) throw DimMismatch("matrix/vector shapes differ");
  const std::size_t n = A.rows;
  Matrix U = A;
  Vector y = b;
  double max_entry = 0.0;
  for (double x : A.data) max_entry = std::max(max_entry, std::fabs(x));
  const double pivot_floor = 1e-12 * max_entry;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::fabs(U.at(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      const double a = std::fabs(U.at(i, col));
      if (a > best) {
        best = a;
        piv = i;
      }
    }
    if (best <= pivot_floor)
      throw SingularMatrix("pivot below singularity threshold");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(U.at(col, j), U.at(piv, j));
      std::swap(y[col], y[piv]);
    }
    const double d = U.at(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = U.at(i, col) / d;
      if (f == 0.0) continue;
      U.at(i, col) = 0.0;
      for (std::size_t j = col + 1; j < n; ++j) U.at(i, j) -= f * U.at(col, j);
      y[i] -= f * y[col];
    }
  }

  Vector x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= U.at(ii, j) * x[j];
    x[ii] = s / U.at(ii, ii);
  }
  return x;
}

double simpson(const std::vector<double>& values, double h) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0)
    throw BadSampleCount("composite Simpson needs an odd sample count >= 3");
  double s = values.front() + values.back();
  for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  return s * h / 3.0;
}

double pairwise_diameter(const PointSet& ps) {
  double best = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      best = std::max(best, distance(ps.points[i], ps.points[j], ps.norm));
  return best;
}

double modulus_convexity_l2(double eps) {
  if (!(eps >= 0.0 && eps <= 2.0))
    throw OutOfRange("modulus of convexity requires eps in [0, 2]");
  return 1.0 - std::sqrt(1.0 - eps * eps / 4.0);
}

}  // namespace fpp
