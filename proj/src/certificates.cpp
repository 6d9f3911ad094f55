#include "fpp/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpp/linprog.hpp"

namespace fpp::cert {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kHullZero = 1e-12;

void check_inputs(const std::vector<Vector>& vs) {
  if (vs.empty()) throw EmptyInput("need at least one vector");
  for (const auto& v : vs)
    if (v.size() != vs.front().size())
      throw DimMismatch("vectors must share one dimension");
}

DualCertificate solve_l2(const std::vector<Vector>& vs) {
  const auto inner = pressure::inner_unsigned_min(vs, NormSpec::l2());
  DualCertificate c;
  c.norm_of_f = NormSpec::l2();
  const std::size_t d = vs.front().size();
  Vector x(d, 0.0);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) x[j] += inner.coefficients[i] * vs[i][j];
  const double nx = norm(x, NormSpec::l2());
  if (nx <= kHullZero) {  // origin in the hull: only the trivial level
    c.f.assign(d, 0.0);
    c.gamma = 0.0;
    return c;
  }
  c.f = vec_scale(1.0 / nx, x);
  c.gamma = nx;
  return c;
}

// max t s.t. ||f||_dual <= 1 and f(v_i) >= t.  Variables: f split into
// positive/negative parts is handled by the solver's free-variable support;
// t >= 0 (the programme always admits f = 0, t = 0).
DualCertificate solve_polyhedral(const std::vector<Vector>& vs,
                                 const NormSpec& primal) {
  const std::size_t m = vs.size(), d = vs.front().size();
  const bool dual_is_linf = primal.kind == NormSpec::Kind::L1;
  lp::LinearProgram prog;
  std::size_t nvar, nrow;
  if (dual_is_linf) {
    // |f_j| <= 1 rows, then the m level constraints.
    nvar = d + 1;
    nrow = 2 * d + m;
  } else {
    // auxiliary g_j >= |f_j| and sum g <= 1, then the level constraints.
    nvar = 2 * d + 1;
    nrow = 2 * d + 1 + m;
  }
  prog.A = Matrix(nrow, nvar);
  prog.b.assign(nrow, 0.0);
  prog.c.assign(nvar, 0.0);
  prog.rels.assign(nrow, lp::Rel::LessEq);
  prog.free_vars.assign(nvar, false);
  for (std::size_t j = 0; j < d; ++j) prog.free_vars[j] = true;
  const std::size_t t_col = nvar - 1;
  prog.c[t_col] = -1.0;  // maximize t

  std::size_t row = 0;
  for (std::size_t j = 0; j < d; ++j) {
    prog.A.at(row, j) = 1.0;
    if (!dual_is_linf) prog.A.at(row, d + j) = -1.0;
    prog.b[row++] = dual_is_linf ? 1.0 : 0.0;
    prog.A.at(row, j) = -1.0;
    if (!dual_is_linf) prog.A.at(row, d + j) = -1.0;
    prog.b[row++] = dual_is_linf ? 1.0 : 0.0;
  }
  if (!dual_is_linf) {
    for (std::size_t j = 0; j < d; ++j) prog.A.at(row, d + j) = 1.0;
    prog.b[row++] = 1.0;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) prog.A.at(row, j) = vs[i][j];
    prog.A.at(row, t_col) = -1.0;
    prog.rels[row] = lp::Rel::GreaterEq;
    prog.b[row++] = 0.0;
  }

  const auto res = lp::solve_lp(prog);
  if (res.status != lp::LPStatus::Optimal)
    throw LPDegenerate("certificate LP did not reach optimality");
  DualCertificate c;
  c.norm_of_f = dual_norm_spec(primal);
  c.f.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(d));
  c.gamma = res.x[t_col];
  if (c.gamma == 0.0) c.gamma = 0.0;  // normalize -0
  return c;
}

}  // namespace

DualCertificate solve_certificate(const std::vector<Vector>& vs,
                                  const NormSpec& n) {
  check_inputs(vs);
  switch (n.kind) {
    case NormSpec::Kind::L2:
      return solve_l2(vs);
    case NormSpec::Kind::L1:
    case NormSpec::Kind::Linf:
      return solve_polyhedral(vs, n);
    case NormSpec::Kind::Lp:
      throw UnsupportedNorm("certificates are solved for l1, l2, linf only");
  }
  throw Error("unreachable norm kind");
}

VerifyRecord verify_certificate(const DualCertificate& c,
                                const std::vector<Vector>& vs) {
  check_inputs(vs);
  if (c.f.size() != vs.front().size())
    throw DimMismatch("certificate dimension mismatch");
  VerifyRecord rec;
  rec.dual_norm_ok = norm(c.f, c.norm_of_f) <= 1.0 + kSlack;
  rec.level_ok = true;
  rec.abs_level_ok = true;
  for (const auto& v : vs) {
    const double fv = dot(c.f, v);
    if (fv < c.gamma - kSlack) rec.level_ok = false;
    if (std::fabs(fv) < c.gamma - kSlack) rec.abs_level_ok = false;
  }
  return rec;
}

double cert_bound_unsigned(const DualCertificate& c,
                           const std::vector<Vector>& vs) {
  const VerifyRecord rec = verify_certificate(c, vs);
  if (!rec.level_ok)
    throw InvalidCertificate("certificate level does not hold on the points");
  if (!rec.dual_norm_ok)
    throw InvalidCertificate("functional lies outside the dual unit ball");
  // For simplex weights w: f(sum w_i v_i) = sum w_i f(v_i) >= gamma, and
  // ||z|| >= f(z) whenever ||f||_dual <= 1; both checks are load-bearing.
  return c.gamma;
}

double mutual_coherence(const PointSet& ps) {
  if (ps.norm.kind != NormSpec::Kind::L2)
    throw NonEuclideanNorm("mutual coherence requires the Euclidean norm");
  if (ps.size() < 2) throw TooFewPoints("need at least two points");
  const std::size_t m = ps.size();
  // Pass one: row norms.
  Vector norms(m);
  for (std::size_t i = 0; i < m; ++i) {
    norms[i] = norm(ps.points[i], NormSpec::l2());
    if (norms[i] == 0.0) throw ZeroVector("coherence undefined for the zero vector");
  }
  // Pass two: pairwise normalized inner products, row-major order.
  double mu = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double g =
          std::fabs(dot(ps.points[i], ps.points[j])) / (norms[i] * norms[j]);
      if (g > mu) mu = g;
    }
  return mu;
}

CoherenceReport coherence_phi_lower(std::size_t m, double mu) {
  if (m < 1) throw OutOfRange("need m >= 1");
  if (!(mu >= 0.0 && mu <= 1.0)) throw OutOfRange("mu must lie in [0, 1]");
  CoherenceReport rep;
  rep.mu = mu;
  rep.m = m;
  const double head = 1.0 - static_cast<double>(m - 1) * mu;
  rep.clamped = head <= 0.0;
  const double num = std::sqrt(std::max(0.0, head));
  rep.phi_lower =
      num / (std::sqrt(static_cast<double>(m)) * std::sqrt(2.0 * (1.0 + mu)));
  return rep;
}

double spectral_phi_lower(const PointSet& ps, double delta) {
  if (ps.norm.kind != NormSpec::Kind::L2)
    throw NonEuclideanNorm("spectral bound requires the Euclidean norm");
  if (!(delta > 0.0)) throw ZeroDelta("delta must be positive");
  const Matrix G = gram(ps);
  const std::size_t m = ps.size();
  double lambda_min;
  if (m == 1) {
    lambda_min = G.at(0, 0);
  } else if (m == 2) {
    lambda_min = sym_eigen_2x2(G).second;
  } else {
    try {
      const auto res = inverse_power_iteration_min(G, 1e-10, 10000, 0x5eed);
      lambda_min = res.value;
    } catch (const SingularMatrix&) {
      return 0.0;  // Gram matrix singular to working precision
    }
  }
  if (lambda_min <= 1e-12) return 0.0;
  return std::sqrt(lambda_min) / (std::sqrt(static_cast<double>(m)) * delta);
}

PipelineReport certificate_pipeline(
    const pressure::PressureQuery& q,
    const std::map<std::size_t, std::vector<std::size_t>>& per_k_tuples,
    const std::map<std::size_t, DualCertificate>& per_k_certs) {
  const double delta = pressure::resolve_delta(q);
  const PointSet normd = pressure::normalize_points(q.set, q.base, delta);

  PipelineReport rep;
  rep.min_gamma = std::numeric_limits<double>::infinity();
  for (const auto& [k, cert] : per_k_certs) {
    const auto it = per_k_tuples.find(k);
    if (it == per_k_tuples.end())
      throw OutOfRange("no tuple supplied for a certified k");
    const auto& idx = it->second;
    if (idx.size() != k) throw LengthMismatch("tuple size does not match k");
    std::vector<Vector> sel;
    sel.reserve(k);
    for (const std::size_t i : idx) {
      if (i >= normd.size()) throw OutOfRange("tuple index out of range");
      sel.push_back(normd.points[i]);
    }
    PipelineEntry entry;
    entry.k = k;
    entry.gamma = cert.gamma;
    entry.verification = verify_certificate(cert, sel);
    entry.unsigned_value = pressure::inner_unsigned_min(sel, normd.norm).value;
    entry.signed_value =
        pressure::inner_signed_min(sel, normd.norm,
                                   pressure::SignedMethod::exact_sign_patterns)
            .value;
    entry.signed_claim_confirmed = entry.signed_value >= cert.gamma - kSlack;
    rep.signed_claim_all_confirmed =
        rep.signed_claim_all_confirmed && entry.signed_claim_confirmed;
    rep.min_gamma = std::min(rep.min_gamma, entry.gamma);
    rep.entries.push_back(std::move(entry));
  }
  if (rep.entries.empty()) rep.min_gamma = 0.0;
  return rep;
}

}  // namespace fpp::cert
