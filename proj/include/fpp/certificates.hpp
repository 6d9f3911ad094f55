#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "fpp/pressure.hpp"
#include "fpp/vectorspace.hpp"

namespace fpp::cert {

struct ZeroVector : Error {
  using Error::Error;
};
struct TooFewPoints : Error {
  using Error::Error;
};
struct InvalidCertificate : Error {
  using Error::Error;
};
struct LPDegenerate : Error {
  using Error::Error;
};

enum class CertScope { unsigned_valid, signed_claimed };

// Linear functional f (as a coefficient vector), with a certified level
// gamma: ||f|| <= 1 under norm_of_f and f(v_i) >= gamma on the certified
// points.
struct DualCertificate {
  Vector f;
  double gamma = 0.0;
  NormSpec norm_of_f = NormSpec::l2();
  CertScope scope = CertScope::unsigned_valid;
};

struct VerifyRecord {
  bool dual_norm_ok = false;
  bool level_ok = false;
  bool abs_level_ok = false;
};

struct CoherenceReport {
  double mu = 0.0;
  std::size_t m = 0;
  std::optional<double> lambda_min;
  double phi_lower = 0.0;
  bool clamped = false;
};

struct PipelineEntry {
  std::size_t k = 0;
  double gamma = 0.0;
  VerifyRecord verification;
  double unsigned_value = 0.0;  // simplex-weight minimum on the tuple
  double signed_value = 0.0;    // signed unit-l1 minimum on the tuple
  bool signed_claim_confirmed = false;
};

struct PipelineReport {
  std::vector<PipelineEntry> entries;  // ascending k
  double min_gamma = 0.0;              // certified unsigned lower bound
  bool signed_claim_all_confirmed = true;
};

// max { t : ||f||_dual <= 1, f(v_i) >= t for all i }.  Euclidean case via
// the min-norm point of the hull; L1/Linf dual balls via a small LP.
DualCertificate solve_certificate(const std::vector<Vector>& vs,
                                  const NormSpec& n);

VerifyRecord verify_certificate(const DualCertificate& c,
                                const std::vector<Vector>& vs);

// gamma as a certified lower bound on the simplex-weight minimum of vs.
double cert_bound_unsigned(const DualCertificate& c,
                           const std::vector<Vector>& vs);

// max over i < j of |<v_i, v_j>| / (||v_i|| ||v_j||), Euclidean only.
double mutual_coherence(const PointSet& ps);

// sqrt(max(0, 1 - (m-1) mu)) / (sqrt(m) sqrt(2 (1 + mu))).
CoherenceReport coherence_phi_lower(std::size_t m, double mu);

// sqrt(lambda_min(Gram)) / (sqrt(m) * delta); 0 when the Gram matrix is
// singular or indefinite to working precision.
double spectral_phi_lower(const PointSet& ps, double delta);

// Verifies one certificate per k against the chosen index tuple, reports
// min gamma as an unsigned lower bound and checks the signed claim
// per tuple (the claim can fail; the outcome is recorded, not assumed).
PipelineReport certificate_pipeline(
    const pressure::PressureQuery& q,
    const std::map<std::size_t, std::vector<std::size_t>>& per_k_tuples,
    const std::map<std::size_t, DualCertificate>& per_k_certs);

}  // namespace fpp::cert
