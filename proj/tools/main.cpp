// Command-line front end: pressure | certificate | coherence | dynamics |
// replicate.  Exit codes: 0 success, 2 input/parse error, 3 computational
// precondition failure, 4 replication mismatch.
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpp/certificates.hpp"
#include "fpp/dynamics.hpp"
#include "fpp/io.hpp"
#include "fpp/pressure.hpp"
#include "fpp/replication.hpp"
#include "fpp/vectorspace.hpp"

namespace {

using namespace fpp;
using io::fmt17;
using io::JsonWriter;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCompute = 3;
constexpr int kExitReplication = 4;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

int input_error(const std::string& msg) {
  std::fprintf(stderr, "input error: %s\n", msg.c_str());
  return kExitInput;
}

int compute_error(const std::string& msg) {
  std::fprintf(stderr, "computation error: %s\n", msg.c_str());
  return kExitCompute;
}

std::string join_nums(const Vector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt17(v[i]);
  }
  return s + "]";
}

std::string join_idx(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

// ---------------------------------------------------------------- pressure

struct PressureArgs {
  std::string input;
  std::string norm;  // override / plain-format norm
  std::vector<double> base;
  double delta = 0.0;
  bool has_delta = false;
  long long k = -1;
  long long k_max = -1;
  std::string variant = "signed";
  double eta = 0.0;
  bool has_eta = false;
  std::string mode = "exhaustive";
  std::size_t budget = 200000;
  std::uint64_t seed = 0;
  double tolerance = 1e-12;
  std::string format = "text";
};

int run_pressure(const PressureArgs& a) {
  pressure::PressureQuery q;
  std::string norm_name;
  std::string delta_source;
  bool use_kmax = false;
  std::size_t k_arg = 0;
  try {
    io::InputDocument doc = io::load_input_file(a.input);
    NormSpec n = doc.norm_given ? doc.norm : NormSpec::l2();
    if (!a.norm.empty()) n = io::parse_norm_tag(a.norm);
    q.set = PointSet(doc.points, n);
    if (!a.base.empty()) {
      q.base = a.base;
    } else if (doc.base) {
      q.base = *doc.base;
    } else {
      throw io::ParseError("pressure needs a base point (file field or --base)");
    }
    if (q.base.size() != q.set.dim)
      throw io::ParseError("base must have the points' dimension");
    if (a.has_delta) {
      if (!(a.delta > 0.0)) throw io::ParseError("--delta must be positive");
      q.delta = a.delta;
    } else if (doc.delta) {
      q.delta = *doc.delta;
    }
    delta_source = q.delta ? "given" : "diameter";
    if ((a.k < 0) == (a.k_max < 0))
      throw io::ParseError("give exactly one of --k or --k-max");
    use_kmax = a.k_max >= 0;
    if (use_kmax) {
      if (a.k_max < 1) throw io::ParseError("--k-max must be >= 1");
      q.k_max = static_cast<std::size_t>(a.k_max);
    } else {
      if (a.k < 1) throw io::ParseError("--k must be >= 1");
      k_arg = static_cast<std::size_t>(a.k);
    }
    if (a.variant != "signed" && a.variant != "unsigned" &&
        a.variant != "separated")
      throw io::ParseError("--variant must be signed|unsigned|separated");
    if (a.mode != "exhaustive" && a.mode != "search")
      throw io::ParseError("--mode must be exhaustive|search");
    if (a.variant == "separated") {
      if (!a.has_eta) throw io::ParseError("the separated variant needs --eta");
      if (a.mode == "search")
        throw io::ParseError("the separated variant is exhaustive only");
    }
    if (a.has_eta) {
      if (!(a.eta > 0.0 && a.eta <= 1.0))
        throw io::ParseError("--eta must lie in (0, 1]");
      q.eta = a.eta;
    }
    if (a.budget < 1) throw io::ParseError("--budget must be >= 1");
    q.search_budget = a.budget;
    q.seed = a.seed;
    if (a.format != "text" && a.format != "structured")
      throw io::ParseError("--format must be text|structured");
    norm_name = io::norm_tag(n);
  } catch (const Error& e) {
    return input_error(e.what());
  }

  const auto mode = a.mode == "search" ? pressure::SearchMode::search
                                       : pressure::SearchMode::exhaustive;
  const auto variant = a.variant == "signed"
                           ? pressure::Variant::signed_l1
                           : (a.variant == "unsigned"
                                  ? pressure::Variant::unsigned_weights
                                  : pressure::Variant::separated);

  Timer timer;
  pressure::PressureReport rep;
  double resolved_delta = 0.0;
  try {
    resolved_delta = pressure::resolve_delta(q);
    if (use_kmax) {
      rep = pressure::pressure_P(q, variant, mode);
    } else {
      pressure::PerKRecord rec;
      switch (variant) {
        case pressure::Variant::signed_l1:
          rec = pressure::phi_k(q, k_arg, mode);
          break;
        case pressure::Variant::unsigned_weights:
          rec = pressure::psi_k(q, k_arg, mode);
          break;
        case pressure::Variant::separated:
          rec = pressure::phi_k_separated(q, k_arg);
          break;
      }
      rep.per_k.push_back(rec);
      rep.truncated_inf = rec.value;
    }
  } catch (const Error& e) {
    return compute_error(e.what());
  }
  const double wall_ms = timer.ms();

  if (a.format == "structured") {
    JsonWriter w;
    w.obj_open();
    w.key("command").str("pressure");
    w.key("config").obj_open();
    w.key("input").str(a.input);
    w.key("norm").str(norm_name);
    w.key("m").uint(q.set.size());
    w.key("dim").uint(q.set.dim);
    w.key("base").nums(q.base);
    w.key("delta").num(resolved_delta);
    w.key("delta_source").str(delta_source);
    w.key("variant").str(a.variant);
    w.key("mode").str(a.mode);
    if (a.has_eta) w.key("eta").num(a.eta);
    if (use_kmax)
      w.key("k_max").uint(q.k_max);
    else
      w.key("k").uint(k_arg);
    w.key("budget").uint(q.search_budget);
    w.key("seed").uint(q.seed);
    w.key("tolerance").num(a.tolerance);
    w.obj_close();
    w.key("per_k").arr_open();
    for (const auto& rec : rep.per_k) {
      w.obj_open();
      w.key("k").uint(rec.k);
      w.key("value").num(rec.value);
      w.key("witness").uints(rec.witness);
      w.key("bound").str(rec.bound_kind == pressure::BoundKind::exact
                             ? "exact"
                             : "lower_bound");
      w.key("admissible").boolean(rec.admissible);
      w.key("below_tolerance").boolean(rec.value <= a.tolerance);
      w.obj_close();
    }
    w.arr_close();
    w.key("truncated_inf").num(rep.truncated_inf);
    w.key("truncated_inf_exact").boolean(rep.truncated_inf_exact());
    w.key("exact_zero_rule_applied").boolean(rep.exact_zero_rule_applied);
    w.obj_close();
    std::printf("%s\n", w.result().c_str());
  } else {
    std::printf("pressure report\n");
    std::printf("  input: %s (m=%zu, dim=%zu, norm=%s)\n", a.input.c_str(),
                q.set.size(), q.set.dim, norm_name.c_str());
    std::printf("  base: %s\n", join_nums(q.base).c_str());
    std::printf("  delta: %s (%s)\n", fmt17(resolved_delta).c_str(),
                delta_source.c_str());
    std::printf("  variant: %s  mode: %s  budget: %zu  seed: %llu\n",
                a.variant.c_str(), a.mode.c_str(), q.search_budget,
                static_cast<unsigned long long>(q.seed));
    if (a.has_eta) std::printf("  eta: %s\n", fmt17(a.eta).c_str());
    for (const auto& rec : rep.per_k)
      std::printf("  k=%zu  value=%s  bound=%s  admissible=%s  witness=%s%s\n",
                  rec.k, fmt17(rec.value).c_str(),
                  rec.bound_kind == pressure::BoundKind::exact ? "exact"
                                                               : "lower_bound",
                  rec.admissible ? "yes" : "no", join_idx(rec.witness).c_str(),
                  rec.value <= a.tolerance ? "  (below tolerance)" : "");
    std::printf("  truncated_inf: %s (%s)%s\n", fmt17(rep.truncated_inf).c_str(),
                rep.truncated_inf_exact() ? "exact" : "lower bound",
                rep.exact_zero_rule_applied ? "  [exact zero rule]" : "");
    std::printf("  wall_time_ms: %.3f\n", wall_ms);
  }
  return kExitOk;
}

// -------------------------------------------------------------- certificate

struct CertificateArgs {
  std::string input;
  std::string norm;
  std::string format = "text";
};

int run_certificate(const CertificateArgs& a) {
  std::vector<Vector> vs;
  NormSpec n = NormSpec::l2();
  std::string norm_name;
  bool normalized = false;
  try {
    io::InputDocument doc = io::load_input_file(a.input);
    if (doc.norm_given) n = doc.norm;
    if (!a.norm.empty()) n = io::parse_norm_tag(a.norm);
    PointSet ps(doc.points, n);
    if (doc.base) {
      pressure::PressureQuery q;
      q.set = ps;
      q.base = *doc.base;
      q.delta = doc.delta;
      const double delta = pressure::resolve_delta(q);
      vs = pressure::normalize_points(ps, *doc.base, delta).points;
      normalized = true;
    } else {
      vs = ps.points;
    }
    if (a.format != "text" && a.format != "structured")
      throw io::ParseError("--format must be text|structured");
    norm_name = io::norm_tag(n);
  } catch (const Error& e) {
    return input_error(e.what());
  }

  Timer timer;
  cert::DualCertificate c;
  cert::VerifyRecord v;
  double unsigned_bound = 0.0;
  std::optional<double> signed_value;
  try {
    c = cert::solve_certificate(vs, n);
    v = cert::verify_certificate(c, vs);
    unsigned_bound = cert::cert_bound_unsigned(c, vs);
    if (vs.size() <= 16)
      signed_value =
          pressure::inner_signed_min(vs, n,
                                     pressure::SignedMethod::exact_sign_patterns)
              .value;
  } catch (const Error& e) {
    return compute_error(e.what());
  }
  const double wall_ms = timer.ms();

  if (a.format == "structured") {
    JsonWriter w;
    w.obj_open();
    w.key("command").str("certificate");
    w.key("config").obj_open();
    w.key("input").str(a.input);
    w.key("norm").str(norm_name);
    w.key("m").uint(vs.size());
    w.key("dim").uint(vs.front().size());
    w.key("normalized").boolean(normalized);
    w.obj_close();
    w.key("f").nums(c.f);
    w.key("gamma").num(c.gamma);
    w.key("dual_norm").str(io::norm_tag(c.norm_of_f));
    w.key("verify").obj_open();
    w.key("dual_norm_ok").boolean(v.dual_norm_ok);
    w.key("level_ok").boolean(v.level_ok);
    w.key("abs_level_ok").boolean(v.abs_level_ok);
    w.obj_close();
    w.key("unsigned_bound").num(unsigned_bound);
    if (signed_value) {
      w.key("signed_check").obj_open();
      w.key("value").num(*signed_value);
      w.key("confirmed").boolean(*signed_value >= c.gamma - 1e-9);
      w.obj_close();
    }
    w.obj_close();
    std::printf("%s\n", w.result().c_str());
  } else {
    std::printf("certificate report\n");
    std::printf("  input: %s (m=%zu, dim=%zu, norm=%s%s)\n", a.input.c_str(),
                vs.size(), vs.front().size(), norm_name.c_str(),
                normalized ? ", normalized" : "");
    std::printf("  f: %s\n", join_nums(c.f).c_str());
    std::printf("  gamma: %s\n", fmt17(c.gamma).c_str());
    std::printf("  dual norm (%s of f): %s\n",
                io::norm_tag(c.norm_of_f).c_str(),
                fmt17(norm(c.f, c.norm_of_f)).c_str());
    std::printf("  checks: dual_norm_ok=%s level_ok=%s abs_level_ok=%s\n",
                v.dual_norm_ok ? "yes" : "no", v.level_ok ? "yes" : "no",
                v.abs_level_ok ? "yes" : "no");
    std::printf("  unsigned bound: %s\n", fmt17(unsigned_bound).c_str());
    if (signed_value)
      std::printf("  signed check: value=%s %s\n", fmt17(*signed_value).c_str(),
                  *signed_value >= c.gamma - 1e-9 ? "confirmed" : "VIOLATED");
    else
      std::printf("  signed check: skipped (more than 16 points)\n");
    std::printf("  wall_time_ms: %.3f\n", wall_ms);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- coherence

struct CoherenceArgs {
  std::string input;
  std::string norm;
  std::vector<double> base;
  double delta = 0.0;
  bool has_delta = false;
  bool cross_check = false;
  std::string format = "text";
};

int run_coherence(const CoherenceArgs& a) {
  PointSet diffs({{0.0}}, NormSpec::l2());
  pressure::PressureQuery q;
  bool have_base = false;
  try {
    io::InputDocument doc = io::load_input_file(a.input);
    NormSpec n = doc.norm_given ? doc.norm : NormSpec::l2();
    if (!a.norm.empty()) n = io::parse_norm_tag(a.norm);
    PointSet ps(doc.points, n);
    Vector base(ps.dim, 0.0);
    if (!a.base.empty()) {
      base = a.base;
      have_base = true;
    } else if (doc.base) {
      base = *doc.base;
      have_base = true;
    }
    if (base.size() != ps.dim)
      throw io::ParseError("base must have the points' dimension");
    std::vector<Vector> shifted;
    shifted.reserve(ps.size());
    for (const auto& p : ps.points) shifted.push_back(vec_sub(p, base));
    diffs = PointSet(std::move(shifted), n);
    q.set = ps;
    q.base = base;
    if (a.has_delta) {
      if (!(a.delta > 0.0)) throw io::ParseError("--delta must be positive");
      q.delta = a.delta;
    } else if (doc.delta) {
      q.delta = *doc.delta;
    }
    if (a.format != "text" && a.format != "structured")
      throw io::ParseError("--format must be text|structured");
  } catch (const Error& e) {
    return input_error(e.what());
  }

  Timer timer;
  double mu = 0.0, spectral = 0.0, resolved_delta = 0.0;
  cert::CoherenceReport rep;
  struct CrossRow {
    std::size_t k;
    double phi;
    bool coherence_ok;
    bool spectral_ok;
  };
  std::vector<CrossRow> cross;
  bool cross_ran = false, cross_all_ok = true;
  try {
    resolved_delta = pressure::resolve_delta(q);
    mu = cert::mutual_coherence(diffs);
    rep = cert::coherence_phi_lower(diffs.size(), std::min(mu, 1.0));
    spectral = cert::spectral_phi_lower(diffs, resolved_delta);
    rep.lambda_min = spectral * spectral *
                     static_cast<double>(diffs.size()) * resolved_delta *
                     resolved_delta;
    if (a.cross_check && diffs.size() <= 6) {
      cross_ran = true;
      for (std::size_t k = 1; k <= diffs.size(); ++k) {
        const auto rec = pressure::phi_k(q, k, pressure::SearchMode::exhaustive);
        CrossRow row{k, rec.value, rep.phi_lower <= rec.value + 1e-8,
                     spectral <= rec.value + 1e-8};
        cross_all_ok = cross_all_ok && row.coherence_ok && row.spectral_ok;
        cross.push_back(row);
      }
    }
  } catch (const Error& e) {
    return compute_error(e.what());
  }
  const double wall_ms = timer.ms();

  if (a.format == "structured") {
    JsonWriter w;
    w.obj_open();
    w.key("command").str("coherence");
    w.key("config").obj_open();
    w.key("input").str(a.input);
    w.key("m").uint(diffs.size());
    w.key("dim").uint(diffs.dim);
    w.key("base_given").boolean(have_base);
    w.key("delta").num(resolved_delta);
    w.key("cross_check").boolean(a.cross_check);
    w.obj_close();
    w.key("mu").num(mu);
    w.key("phi_lower").num(rep.phi_lower);
    w.key("clamped").boolean(rep.clamped);
    w.key("lambda_min").num(*rep.lambda_min);
    w.key("spectral_lower").num(spectral);
    if (cross_ran) {
      w.key("cross").arr_open();
      for (const auto& row : cross) {
        w.obj_open();
        w.key("k").uint(row.k);
        w.key("phi").num(row.phi);
        w.key("coherence_le_phi").boolean(row.coherence_ok);
        w.key("spectral_le_phi").boolean(row.spectral_ok);
        w.obj_close();
      }
      w.arr_close();
      w.key("cross_all_ok").boolean(cross_all_ok);
    }
    w.obj_close();
    std::printf("%s\n", w.result().c_str());
  } else {
    std::printf("coherence report\n");
    std::printf("  input: %s (m=%zu, dim=%zu)\n", a.input.c_str(), diffs.size(),
                diffs.dim);
    std::printf("  delta: %s\n", fmt17(resolved_delta).c_str());
    std::printf("  mu: %s\n", fmt17(mu).c_str());
    std::printf("  phi_lower: %s%s\n", fmt17(rep.phi_lower).c_str(),
                rep.clamped ? "  (clamped)" : "");
    std::printf("  lambda_min: %s\n", fmt17(*rep.lambda_min).c_str());
    std::printf("  spectral_lower: %s\n", fmt17(spectral).c_str());
    if (cross_ran) {
      for (const auto& row : cross)
        std::printf("  k=%zu  phi=%s  coherence<=phi:%s  spectral<=phi:%s\n",
                    row.k, fmt17(row.phi).c_str(),
                    row.coherence_ok ? "yes" : "NO",
                    row.spectral_ok ? "yes" : "NO");
      std::printf("  cross check: %s\n", cross_all_ok ? "all ok" : "FAILED");
    }
    std::printf("  wall_time_ms: %.3f\n", wall_ms);
  }
  return kExitOk;
}

// ----------------------------------------------------------------- dynamics

struct DynamicsArgs {
  std::string map_path;
  std::vector<double> x0;
  std::size_t steps = 10;
  std::string scheme = "plain";
  bool check_lemmas = false;
  bool fixed_point = false;
  std::string format = "text";
};

int run_dynamics(const DynamicsArgs& a) {
  dyn::MapSpec m = dyn::MapSpec::translation({0.0});
  try {
    m = io::load_map_file(a.map_path);
    if (a.x0.empty()) throw io::ParseError("--x0 is required");
    if (a.x0.size() != m.dim())
      throw io::ParseError("--x0 must match the map dimension");
    if (a.scheme != "plain" && a.scheme != "krasnoselskii")
      throw io::ParseError("--scheme must be plain|krasnoselskii");
    if (a.format != "text" && a.format != "structured")
      throw io::ParseError("--format must be text|structured");
  } catch (const Error& e) {
    return input_error(e.what());
  }

  Timer timer;
  dyn::OrbitRecord orb;
  std::optional<Vector> fixed;
  std::optional<dyn::DisplacementCheck> lemmas;
  bool nonexpansive = false;
  try {
    nonexpansive = dyn::is_nonexpansive(m);
    orb = dyn::orbit(m, a.x0, a.steps,
                     a.scheme == "plain" ? dyn::Scheme::plain
                                         : dyn::Scheme::krasnoselskii);
    if (a.fixed_point) fixed = dyn::fixed_point_affine(m);
    if (a.check_lemmas)
      lemmas = dyn::displacement_diameter_check(
          m, PointSet(orb.iterates, m.ambient_norm));
  } catch (const Error& e) {
    return compute_error(e.what());
  }
  const double wall_ms = timer.ms();

  const char* kind =
      m.kind == dyn::MapSpec::Kind::affine ? "affine" : "translation";
  if (a.format == "structured") {
    JsonWriter w;
    w.obj_open();
    w.key("command").str("dynamics");
    w.key("config").obj_open();
    w.key("map").str(a.map_path);
    w.key("kind").str(kind);
    w.key("norm").str(io::norm_tag(m.ambient_norm));
    w.key("b").nums(m.b);
    w.key("x0").nums(a.x0);
    w.key("steps").uint(a.steps);
    w.key("scheme").str(a.scheme);
    w.key("nonexpansive").boolean(nonexpansive);
    w.obj_close();
    w.key("orbit").obj_open();
    w.key("residuals").nums(orb.residuals);
    w.key("final").nums(orb.iterates.back());
    w.key("hull_diameter").num(orb.hull_diameter);
    w.key("displacement_estimate").num(orb.displacement_estimate);
    w.obj_close();
    if (fixed) w.key("fixed_point").nums(*fixed);
    if (lemmas) {
      w.key("lemma_checks").obj_open();
      w.key("delta_est").num(lemmas->delta_est);
      w.key("diam").num(lemmas->diam);
      w.key("delta_le_diam").boolean(lemmas->lemma_5a_ok);
      w.key("delta_le_2_orbit_hull").boolean(lemmas->lemma_5b_ok);
      w.obj_close();
    }
    w.obj_close();
    std::printf("%s\n", w.result().c_str());
  } else {
    std::printf("dynamics report\n");
    std::printf("  map: %s (%s, norm=%s, nonexpansive=%s)\n",
                a.map_path.c_str(), kind, io::norm_tag(m.ambient_norm).c_str(),
                nonexpansive ? "yes" : "no");
    std::printf("  x0: %s  steps: %zu  scheme: %s\n",
                join_nums(a.x0).c_str(), a.steps, a.scheme.c_str());
    std::printf("  final iterate: %s\n", join_nums(orb.iterates.back()).c_str());
    std::printf("  first residual: %s  last residual: %s\n",
                fmt17(orb.residuals.front()).c_str(),
                fmt17(orb.residuals.back()).c_str());
    std::printf("  hull_diameter: %s\n", fmt17(orb.hull_diameter).c_str());
    std::printf("  displacement_estimate: %s\n",
                fmt17(orb.displacement_estimate).c_str());
    if (fixed) std::printf("  fixed_point: %s\n", join_nums(*fixed).c_str());
    if (lemmas)
      std::printf(
          "  lemma checks: delta=%s diam=%s delta<=diam:%s "
          "delta<=2*orbit_hull:%s\n",
          fmt17(lemmas->delta_est).c_str(), fmt17(lemmas->diam).c_str(),
          lemmas->lemma_5a_ok ? "yes" : "NO",
          lemmas->lemma_5b_ok ? "yes" : "NO");
    std::printf("  wall_time_ms: %.3f\n", wall_ms);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- replicate

struct ReplicateArgs {
  bool all = false;
  std::string case_name;
  std::string format = "text";
};

int run_replicate(const ReplicateArgs& a) {
  if (a.all == !a.case_name.empty())
    return input_error("give exactly one of --all or --case NAME");
  if (a.format != "text" && a.format != "structured")
    return input_error("--format must be text|structured");

  Timer timer;
  std::vector<repl::ReplicationCase> cases;
  try {
    if (a.all)
      cases = repl::run_all();
    else
      cases.push_back(repl::run_case(a.case_name));
  } catch (const repl::UnknownCase& e) {
    return input_error(e.what());
  } catch (const Error& e) {
    return compute_error(e.what());
  }
  const double wall_ms = timer.ms();

  std::size_t passed = 0;
  for (const auto& c : cases) passed += c.passed ? 1 : 0;

  if (a.format == "structured") {
    JsonWriter w;
    w.obj_open();
    w.key("command").str("replicate");
    w.key("selection").str(a.all ? "all" : a.case_name);
    w.key("cases").arr_open();
    for (const auto& c : cases) {
      w.obj_open();
      w.key("name").str(c.name);
      w.key("expected").nums(c.expected);
      w.key("computed").nums(c.computed);
      w.key("tolerance").num(c.tolerance);
      w.key("passed").boolean(c.passed);
      w.key("reference").str(c.reference);
      w.obj_close();
    }
    w.arr_close();
    w.key("passed_count").uint(passed);
    w.key("total").uint(cases.size());
    w.obj_close();
    std::printf("%s\n", w.result().c_str());
  } else {
    std::printf("replication report\n");
    for (const auto& c : cases) {
      double dev = 0.0;
      for (std::size_t i = 0; i < c.expected.size() && i < c.computed.size();
           ++i)
        dev = std::max(dev, std::fabs(c.computed[i] - c.expected[i]));
      std::printf("  %-32s %s  max_dev=%.3g  tol=%.3g\n", c.name.c_str(),
                  c.passed ? "PASS" : "FAIL", dev, c.tolerance);
    }
    std::printf("  passed %zu/%zu\n", passed, cases.size());
    std::printf("  wall_time_ms: %.3f\n", wall_ms);
  }
  return passed == cases.size() ? kExitOk : kExitReplication;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diametral pressure, dual certificates, and nonexpansive-map "
               "dynamics toolkit"};
  app.require_subcommand(1);

  PressureArgs pa;
  auto* cp = app.add_subcommand(
      "pressure", "Per-k pressure values and truncated infimum");
  cp->add_option("--input", pa.input, "Input document")->required();
  cp->add_option("--norm", pa.norm, "Norm tag override (l1|l2|linf|lp:<p>)");
  cp->add_option("--base", pa.base, "Base point override")->delimiter(',');
  cp->add_option("--delta", pa.delta, "Scale override")
      ->each([&pa](const std::string&) { pa.has_delta = true; });
  cp->add_option("--k", pa.k, "Single tuple size");
  cp->add_option("--k-max", pa.k_max, "Truncation depth for the infimum");
  cp->add_option("--variant", pa.variant, "signed|unsigned|separated");
  cp->add_option("--eta", pa.eta, "Separation fraction in (0,1]")
      ->each([&pa](const std::string&) { pa.has_eta = true; });
  cp->add_option("--mode", pa.mode, "exhaustive|search");
  cp->add_option("--budget", pa.budget, "Tuple evaluation budget");
  cp->add_option("--seed", pa.seed, "Seed for the search mode");
  cp->add_option("--tolerance", pa.tolerance, "Zero-flag threshold");
  cp->add_option("--format", pa.format, "text|structured");

  CertificateArgs ca;
  auto* cc = app.add_subcommand("certificate",
                                "Best uniform-level dual functional");
  cc->add_option("--input", ca.input, "Input document")->required();
  cc->add_option("--norm", ca.norm, "Norm tag override");
  cc->add_option("--format", ca.format, "text|structured");

  CoherenceArgs oa;
  auto* co = app.add_subcommand("coherence",
                                "Coherence and Gram-spectral lower bounds");
  co->add_option("--input", oa.input, "Input document")->required();
  co->add_option("--norm", oa.norm, "Norm tag override");
  co->add_option("--base", oa.base, "Base point override")->delimiter(',');
  co->add_option("--delta", oa.delta, "Scale override")
      ->each([&oa](const std::string&) { oa.has_delta = true; });
  co->add_flag("--cross-check", oa.cross_check,
               "Compare bounds against exhaustive per-k values (m <= 6)");
  co->add_option("--format", oa.format, "text|structured");

  DynamicsArgs da;
  auto* cd = app.add_subcommand("dynamics", "Orbits and displacement checks");
  cd->add_option("--map", da.map_path, "Map document")->required();
  cd->add_option("--x0", da.x0, "Start point")->delimiter(',')->required();
  cd->add_option("--steps", da.steps, "Iteration count");
  cd->add_option("--scheme", da.scheme, "plain|krasnoselskii");
  cd->add_flag("--check-lemmas", da.check_lemmas,
               "Verify displacement/diameter inequalities on the orbit");
  cd->add_flag("--fixed-point", da.fixed_point,
               "Solve for the affine fixed point");
  cd->add_option("--format", da.format, "text|structured");

  ReplicateArgs ra;
  auto* cr = app.add_subcommand("replicate", "Run the pinned value catalogue");
  cr->add_flag("--all", ra.all, "Run every case");
  cr->add_option("--case", ra.case_name, "Run one named case");
  cr->add_option("--format", ra.format, "text|structured");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (cp->parsed()) return run_pressure(pa);
  if (cc->parsed()) return run_certificate(ca);
  if (co->parsed()) return run_coherence(oa);
  if (cd->parsed()) return run_dynamics(da);
  if (cr->parsed()) return run_replicate(ra);
  return kExitInput;
}
