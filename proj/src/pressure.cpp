#include "fpp/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <thread>
#include <utility>

#include "fpp/linprog.hpp"
#include "fpp/rng.hpp"

namespace fpp::pressure {

namespace {

constexpr double kMnpTol = 1e-10;
constexpr std::size_t kMnpCap = 10000;
constexpr std::size_t kSignPatternCap = 16;

std::size_t thread_count() {
  const char* env = std::getenv("FPP_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  return v < 1 ? 1 : static_cast<std::size_t>(v);
}

void check_common_dim(const std::vector<Vector>& vs) {
  if (vs.empty()) throw EmptyInput("need at least one vector");
  for (const auto& v : vs)
    if (v.size() != vs.front().size())
      throw DimMismatch("vectors must share one dimension");
}

// ----- min-norm point over the simplex, Euclidean norm (Wolfe active set) --

struct SimplexMin {
  Vector weights;  // length = #points, nonnegative, sums to 1
  double value = 0.0;
  bool exact = true;
};

Vector combine(const std::vector<Vector>& pts,
               const std::vector<std::size_t>& idx, const Vector& w) {
  Vector x(pts.front().size(), 0.0);
  for (std::size_t t = 0; t < idx.size(); ++t)
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += w[t] * pts[idx[t]][j];
  return x;
}

// Min-norm point of aff{pts[S]}: bordered Gram system [[G,1],[1^T,0]].
// A ridge retry covers affinely dependent active sets (duplicate points).
Vector affine_min_norm_coeffs(const std::vector<Vector>& pts,
                              const std::vector<std::size_t>& S) {
  const std::size_t n = S.size();
  Matrix M(n + 1, n + 1);
  Vector rhs(n + 1, 0.0);
  rhs[n] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double g = dot(pts[S[i]], pts[S[j]]);
      M.at(i, j) = g;
      M.at(j, i) = g;
    }
    M.at(i, n) = 1.0;
    M.at(n, i) = 1.0;
  }
  try {
    return gaussian_solve(M, rhs);
  } catch (const SingularMatrix&) {
    for (std::size_t i = 0; i < n; ++i) M.at(i, i) += 1e-12;
    return gaussian_solve(M, rhs);
  }
}

SimplexMin wolfe_min_norm_point(const std::vector<Vector>& pts) {
  const std::size_t k = pts.size();
  std::size_t init = 0;
  double best_sq = dot(pts[0], pts[0]);
  for (std::size_t i = 1; i < k; ++i) {
    const double s = dot(pts[i], pts[i]);
    if (s < best_sq) {
      best_sq = s;
      init = i;
    }
  }
  std::vector<std::size_t> S{init};
  Vector w{1.0};
  Vector x = pts[init];

  std::size_t iters = 0;
  while (iters++ < kMnpCap) {
    // Major cycle: linear minimization oracle over all points.
    std::size_t j = 0;
    double bestdot = dot(x, pts[0]);
    for (std::size_t i = 1; i < k; ++i) {
      const double di = dot(x, pts[i]);
      if (di < bestdot) {
        bestdot = di;
        j = i;
      }
    }
    if (bestdot >= dot(x, x) - kMnpTol) break;  // optimality certificate
    if (std::find(S.begin(), S.end(), j) != S.end()) break;  // numerical stall
    S.push_back(j);
    w.push_back(0.0);

    // Minor cycles: restrict to aff(S), walk until the affine minimizer is
    // feasible (all coordinates positive).
    while (iters++ < kMnpCap) {
      Vector sol;
      try {
        sol = affine_min_norm_coeffs(pts, S);
      } catch (const SingularMatrix&) {
        S.pop_back();
        w.pop_back();
        iters = kMnpCap;  // cannot improve reliably; stop with current x
        break;
      }
      Vector alpha(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(S.size()));
      bool interior = true;
      for (double a : alpha)
        if (a < 1e-12) {
          interior = false;
          break;
        }
      if (interior) {
        w = alpha;
        break;
      }
      double theta = 1.0;
      for (std::size_t t = 0; t < S.size(); ++t)
        if (alpha[t] <= 1e-12) {
          const double denom = w[t] - alpha[t];
          if (denom > 0.0) theta = std::min(theta, w[t] / denom);
        }
      for (std::size_t t = 0; t < S.size(); ++t)
        w[t] = (1.0 - theta) * w[t] + theta * alpha[t];
      // Drop vanished points.
      std::vector<std::size_t> keepS;
      Vector keepw;
      for (std::size_t t = 0; t < S.size(); ++t)
        if (w[t] > 1e-12) {
          keepS.push_back(S[t]);
          keepw.push_back(w[t]);
        }
      if (keepS.empty()) {  // all mass collapsed; keep the largest weight
        keepS.push_back(S[0]);
        keepw.push_back(1.0);
      }
      S = std::move(keepS);
      w = std::move(keepw);
    }
    x = combine(pts, S, w);
  }

  SimplexMin out;
  out.weights.assign(k, 0.0);
  double sum = 0.0;
  for (double wi : w) sum += wi;
  for (std::size_t t = 0; t < S.size(); ++t) out.weights[S[t]] = w[t] / sum;
  x = combine(pts, S, w);
  out.value = std::sqrt(std::max(0.0, dot(x, x))) / sum;
  return out;
}

// ----- exact LP reformulations for the polyhedral norms ---------------------

SimplexMin lp_min_l1(const std::vector<Vector>& pts) {
  const std::size_t k = pts.size(), d = pts.front().size();
  lp::LinearProgram prog;
  const std::size_t nvar = k + d;  // weights then per-coordinate bounds u_j
  const std::size_t nrow = 2 * d + 1;
  prog.A = Matrix(nrow, nvar);
  prog.b.assign(nrow, 0.0);
  prog.c.assign(nvar, 0.0);
  prog.rels.assign(nrow, lp::Rel::LessEq);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      prog.A.at(2 * j, i) = pts[i][j];
      prog.A.at(2 * j + 1, i) = -pts[i][j];
    }
    prog.A.at(2 * j, k + j) = -1.0;
    prog.A.at(2 * j + 1, k + j) = -1.0;
    prog.c[k + j] = 1.0;
  }
  for (std::size_t i = 0; i < k; ++i) prog.A.at(2 * d, i) = 1.0;
  prog.b[2 * d] = 1.0;
  prog.rels[2 * d] = lp::Rel::Eq;
  const auto res = lp::solve_lp(prog);
  if (res.status != lp::LPStatus::Optimal)
    throw Error("simplex-minimization LP did not reach optimality");
  SimplexMin out;
  out.weights.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(k));
  double sum = 0.0;
  for (double& wi : out.weights) {
    wi = std::max(0.0, wi);
    sum += wi;
  }
  for (double& wi : out.weights) wi /= sum;
  out.value = res.objective;
  return out;
}

SimplexMin lp_min_linf(const std::vector<Vector>& pts) {
  const std::size_t k = pts.size(), d = pts.front().size();
  lp::LinearProgram prog;
  const std::size_t nvar = k + 1;  // weights then the sup bound t
  const std::size_t nrow = 2 * d + 1;
  prog.A = Matrix(nrow, nvar);
  prog.b.assign(nrow, 0.0);
  prog.c.assign(nvar, 0.0);
  prog.rels.assign(nrow, lp::Rel::LessEq);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      prog.A.at(2 * j, i) = pts[i][j];
      prog.A.at(2 * j + 1, i) = -pts[i][j];
    }
    prog.A.at(2 * j, k) = -1.0;
    prog.A.at(2 * j + 1, k) = -1.0;
  }
  for (std::size_t i = 0; i < k; ++i) prog.A.at(2 * d, i) = 1.0;
  prog.b[2 * d] = 1.0;
  prog.rels[2 * d] = lp::Rel::Eq;
  prog.c[k] = 1.0;
  const auto res = lp::solve_lp(prog);
  if (res.status != lp::LPStatus::Optimal)
    throw Error("simplex-minimization LP did not reach optimality");
  SimplexMin out;
  out.weights.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(k));
  double sum = 0.0;
  for (double& wi : out.weights) {
    wi = std::max(0.0, wi);
    sum += wi;
  }
  for (double& wi : out.weights) wi /= sum;
  out.value = res.objective;
  return out;
}

// ----- conditional gradient for general Lp (approximate) --------------------

Vector lp_norm_subgradient(const Vector& z, const NormSpec& n) {
  Vector g(z.size(), 0.0);
  const double nz = norm(z, n);
  if (nz == 0.0) return g;
  switch (n.kind) {
    case NormSpec::Kind::L1:
      for (std::size_t j = 0; j < z.size(); ++j)
        g[j] = z[j] > 0.0 ? 1.0 : (z[j] < 0.0 ? -1.0 : 0.0);
      return g;
    case NormSpec::Kind::Linf: {
      std::size_t arg = 0;
      for (std::size_t j = 1; j < z.size(); ++j)
        if (std::fabs(z[j]) > std::fabs(z[arg])) arg = j;
      g[arg] = z[arg] >= 0.0 ? 1.0 : -1.0;
      return g;
    }
    case NormSpec::Kind::L2:
      for (std::size_t j = 0; j < z.size(); ++j) g[j] = z[j] / nz;
      return g;
    case NormSpec::Kind::Lp:
      for (std::size_t j = 0; j < z.size(); ++j) {
        const double r = std::fabs(z[j]) / nz;
        g[j] = (z[j] >= 0.0 ? 1.0 : -1.0) * std::pow(r, n.p - 1.0);
      }
      return g;
  }
  return g;
}

double eval_weights(const std::vector<Vector>& pts, const Vector& w,
                    const NormSpec& n) {
  Vector z(pts.front().size(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < z.size(); ++j) z[j] += w[i] * pts[i][j];
  return norm(z, n);
}

Vector fw_descend(const std::vector<Vector>& pts, const NormSpec& n,
                  Vector w) {
  const std::size_t k = pts.size(), d = pts.front().size();
  for (std::size_t it = 0; it < 300; ++it) {
    Vector z(d, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < d; ++j) z[j] += w[i] * pts[i][j];
    if (norm(z, n) < 1e-14) break;
    const Vector g = lp_norm_subgradient(z, n);
    std::size_t s = 0;
    double bestg = dot(g, pts[0]);
    for (std::size_t i = 1; i < k; ++i) {
      const double gi = dot(g, pts[i]);
      if (gi < bestg) {
        bestg = gi;
        s = i;
      }
    }
    // Golden-section line search toward vertex s (objective is convex).
    const double inv_phi = 0.6180339887498949;
    double lo = 0.0, hi = 1.0;
    auto f_at = [&](double t) {
      Vector wt = w;
      for (std::size_t i = 0; i < k; ++i) wt[i] *= (1.0 - t);
      wt[s] += t;
      return eval_weights(pts, wt, n);
    };
    double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
    double fa = f_at(a), fb = f_at(b);
    for (int ls = 0; ls < 60; ++ls) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - inv_phi * (hi - lo);
        fa = f_at(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + inv_phi * (hi - lo);
        fb = f_at(b);
      }
    }
    const double t = 0.5 * (lo + hi);
    const double before = eval_weights(pts, w, n);
    Vector wt = w;
    for (std::size_t i = 0; i < k; ++i) wt[i] *= (1.0 - t);
    wt[s] += t;
    if (eval_weights(pts, wt, n) > before - 1e-14) break;
    w = std::move(wt);
  }
  return w;
}

void simplex_grid_scan(const std::vector<Vector>& pts, const NormSpec& n,
                       std::size_t N, Vector& best_w, double& best_v) {
  const std::size_t k = pts.size();
  Vector counts(k, 0.0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
    if (pos + 1 == k) {
      counts[pos] = static_cast<double>(remaining);
      Vector w(k);
      for (std::size_t i = 0; i < k; ++i)
        w[i] = counts[i] / static_cast<double>(N);
      const double v = eval_weights(pts, w, n);
      if (v < best_v) {
        best_v = v;
        best_w = w;
      }
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      counts[pos] = static_cast<double>(c);
      self(self, pos + 1, remaining - c);
    }
  };
  rec(rec, 0, N);
}

SimplexMin cg_min_general(const std::vector<Vector>& pts, const NormSpec& n) {
  const std::size_t k = pts.size();
  Vector best_w(k, 1.0 / static_cast<double>(k));
  double best_v = eval_weights(pts, best_w, n);
  std::vector<Vector> starts;
  starts.push_back(best_w);
  for (std::size_t i = 0; i < k; ++i) {
    Vector e(k, 0.0);
    e[i] = 1.0;
    starts.push_back(std::move(e));
  }
  for (const auto& s : starts) {
    const Vector w = fw_descend(pts, n, s);
    const double v = eval_weights(pts, w, n);
    if (v < best_v) {
      best_v = v;
      best_w = w;
    }
  }
  if (k <= 6) {  // coarse validation net, refined by one more descent
    Vector grid_w = best_w;
    double grid_v = best_v;
    simplex_grid_scan(pts, n, 24, grid_w, grid_v);
    if (grid_v < best_v) {
      const Vector w = fw_descend(pts, n, grid_w);
      const double v = eval_weights(pts, w, n);
      if (v < grid_v) {
        best_v = v;
        best_w = w;
      } else {
        best_v = grid_v;
        best_w = grid_w;
      }
    }
  }
  SimplexMin out;
  out.weights = std::move(best_w);
  out.value = best_v;
  out.exact = false;
  return out;
}

SimplexMin simplex_min(const std::vector<Vector>& pts, const NormSpec& n) {
  switch (n.kind) {
    case NormSpec::Kind::L2:
      return wolfe_min_norm_point(pts);
    case NormSpec::Kind::L1:
      return lp_min_l1(pts);
    case NormSpec::Kind::Linf:
      return lp_min_linf(pts);
    case NormSpec::Kind::Lp:
      return cg_min_general(pts, n);
  }
  throw Error("unreachable norm kind");
}

// ----- enumeration helpers ---------------------------------------------------

// C(n, r) capped: returns cap + 1 as soon as the count exceeds cap.
std::uint64_t binom_capped(std::uint64_t n, std::uint64_t r,
                           std::uint64_t cap) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    c = c * (n - r + i) / i;
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

// rank -> lexicographic k-combination of {0..n-1}; counts stay <= total.
std::vector<std::size_t> unrank_combination(std::uint64_t rank, std::size_t n,
                                            std::size_t k,
                                            std::uint64_t cap) {
  std::vector<std::size_t> out(k);
  std::size_t c = 0;
  for (std::size_t t = 0; t < k; ++t) {
    while (true) {
      const std::uint64_t block =
          binom_capped(n - 1 - c, k - 1 - t, cap);
      if (block > rank) break;
      rank -= block;
      ++c;
    }
    out[t] = c++;
  }
  return out;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t t = k; t-- > 0;) {
    if (idx[t] < n - k + t) {
      ++idx[t];
      for (std::size_t u = t + 1; u < k; ++u) idx[u] = idx[u - 1] + 1;
      return true;
    }
  }
  return false;
}

// Multisets of size k over {0..m-1} as nondecreasing tuples, in lex order,
// via the strictly-increasing bijection j_t = i_t + t.
std::vector<std::size_t> unrank_multiset(std::uint64_t rank, std::size_t m,
                                         std::size_t k, std::uint64_t cap) {
  auto comb = unrank_combination(rank, m + k - 1, k, cap);
  for (std::size_t t = 0; t < k; ++t) comb[t] -= t;
  return comb;
}

bool next_multiset(std::vector<std::size_t>& idx, std::size_t m) {
  const std::size_t k = idx.size();
  for (std::size_t t = k; t-- > 0;) {
    if (idx[t] < m - 1) {
      const std::size_t v = idx[t] + 1;
      for (std::size_t u = t; u < k; ++u) idx[u] = v;
      return true;
    }
  }
  return false;
}

bool has_duplicate(const std::vector<std::size_t>& sorted_idx) {
  for (std::size_t t = 1; t < sorted_idx.size(); ++t)
    if (sorted_idx[t] == sorted_idx[t - 1]) return true;
  return false;
}

struct TupleBest {
  bool any = false;
  double value = -1.0;
  std::vector<std::size_t> tuple;
  bool all_exact = true;

  // Enumeration-order merge: strictly greater wins, ties keep the earlier
  // (lexicographically smaller) tuple.
  void offer(double v, const std::vector<std::size_t>& t, bool exact) {
    all_exact = all_exact && exact;
    if (!any || v > value) {
      any = true;
      value = v;
      tuple = t;
    }
  }

  void merge_after(const TupleBest& later) {
    all_exact = all_exact && later.all_exact;
    if (!later.any) return;
    if (!any || later.value > value) {
      any = later.any;
      value = later.value;
      tuple = later.tuple;
    }
  }
};

// Evaluate all tuples in an enumeration, optionally across FPP_THREADS
// chunks with a deterministic in-order reduction.
template <typename UnrankFn, typename NextFn, typename EvalFn>
TupleBest enumerate_best(std::uint64_t total, UnrankFn unrank, NextFn next,
                         EvalFn eval) {
  const std::size_t want = thread_count();
  const std::size_t T =
      static_cast<std::size_t>(std::min<std::uint64_t>(want, total));
  auto run_chunk = [&](std::uint64_t lo, std::uint64_t hi, TupleBest& out) {
    if (lo >= hi) return;
    std::vector<std::size_t> idx = unrank(lo);
    for (std::uint64_t r = lo; r < hi; ++r) {
      bool exact = true;
      const double v = eval(idx, exact);
      out.offer(v, idx, exact);
      if (r + 1 < hi) next(idx);
    }
  };
  if (T <= 1) {
    TupleBest best;
    run_chunk(0, total, best);
    return best;
  }
  std::vector<TupleBest> part(T);
  std::vector<std::thread> pool;
  pool.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    const std::uint64_t lo = total * t / T;
    const std::uint64_t hi = total * (t + 1) / T;
    pool.emplace_back([&, lo, hi, t] { run_chunk(lo, hi, part[t]); });
  }
  for (auto& th : pool) th.join();
  TupleBest best;
  best.value = -1.0;
  for (const auto& p : part) best.merge_after(p);
  return best;
}

std::vector<Vector> select(const std::vector<Vector>& pts,
                           const std::vector<std::size_t>& idx) {
  std::vector<Vector> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(pts[i]);
  return out;
}

// ----- hill-climbing search over index tuples --------------------------------

struct SearchConfig {
  std::size_t m = 0;
  std::size_t k = 0;
  bool multiset = true;  // false: distinct indices only
};

template <typename EvalFn>
TupleBest hill_climb(const SearchConfig& cfg, std::size_t budget,
                     std::uint64_t seed, EvalFn eval) {
  SeededRng rng(seed);
  std::map<std::vector<std::size_t>, double> cache;
  // Every lookup is charged against the budget so the restart loop always
  // terminates, even once the whole tuple space has been cached.
  std::size_t evals = 0;
  const std::uint64_t space =
      cfg.multiset ? binom_capped(cfg.m + cfg.k - 1, cfg.k, budget)
                   : binom_capped(cfg.m, cfg.k, budget);
  auto eval_cached = [&](const std::vector<std::size_t>& t, bool& fresh) {
    ++evals;
    auto it = cache.find(t);
    if (it != cache.end()) {
      fresh = false;
      return it->second;
    }
    fresh = true;
    bool exact_unused = true;
    const double v = eval(t, exact_unused);
    cache.emplace(t, v);
    return v;
  };
  auto random_tuple = [&] {
    std::vector<std::size_t> t;
    if (cfg.multiset) {
      t.resize(cfg.k);
      for (auto& x : t) x = static_cast<std::size_t>(rng.below(cfg.m));
      std::sort(t.begin(), t.end());
    } else {
      // Distinct sample: seeded partial Fisher-Yates over the index range.
      std::vector<std::size_t> all(cfg.m);
      for (std::size_t i = 0; i < cfg.m; ++i) all[i] = i;
      for (std::size_t i = 0; i < cfg.k; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng.below(cfg.m - i));
        std::swap(all[i], all[j]);
      }
      t.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cfg.k));
      std::sort(t.begin(), t.end());
    }
    return t;
  };

  TupleBest best;
  while (evals < budget) {
    std::vector<std::size_t> cur = random_tuple();
    bool fresh = true;
    double cur_v = eval_cached(cur, fresh);
    best.offer(cur_v, cur, true);
    bool moved = true;
    while (moved && evals < budget) {
      moved = false;
      std::vector<std::size_t> cand_best;
      double cand_v = cur_v;
      for (std::size_t pos = 0; pos < cfg.k && evals < budget; ++pos) {
        for (std::size_t idx = 0; idx < cfg.m && evals < budget; ++idx) {
          std::vector<std::size_t> t = cur;
          t[pos] = idx;
          std::sort(t.begin(), t.end());
          if (t == cur) continue;
          if (!cfg.multiset && has_duplicate(t)) continue;
          const double v = eval_cached(t, fresh);
          best.offer(v, t, true);
          // Strict improvement required to move; among equal improvements
          // the lexicographically smallest neighbour wins.
          if (v > cand_v || (v == cand_v && !cand_best.empty() && t < cand_best)) {
            cand_v = v;
            cand_best = t;
          }
        }
      }
      if (!cand_best.empty() && cand_v > cur_v) {
        cur = cand_best;
        cur_v = cand_v;
        moved = true;
      }
    }
    if (cache.size() >= space) break;  // nothing left to discover
  }
  best.all_exact = false;  // search certifies only a lower bound
  return best;
}

double separation_slack(double delta) { return 1e-12 * delta; }

}  // namespace

// ----- public operations ------------------------------------------------------

bool PressureReport::truncated_inf_exact() const {
  for (const auto& rec : per_k)
    if (rec.bound_kind != BoundKind::exact) return false;
  return true;
}

PointSet normalize_points(const PointSet& set, const Vector& base,
                          double delta) {
  if (!(delta > 0.0)) throw ZeroDelta("normalization requires delta > 0");
  if (base.size() != set.dim)
    throw DimMismatch("base point dimension mismatch");
  std::vector<Vector> pts;
  pts.reserve(set.size());
  for (const auto& y : set.points) {
    Vector v(set.dim);
    for (std::size_t j = 0; j < set.dim; ++j) v[j] = (y[j] - base[j]) / delta;
    pts.push_back(std::move(v));
  }
  return PointSet(std::move(pts), set.norm);
}

double resolve_delta(const PressureQuery& q) {
  if (q.delta) {
    if (!(*q.delta > 0.0)) throw ZeroDelta("delta must be positive");
    return *q.delta;
  }
  std::vector<Vector> pts = q.set.points;
  pts.push_back(q.base);
  const double d = pairwise_diameter(PointSet(std::move(pts), q.set.norm));
  if (!(d > 0.0))
    throw ZeroDelta("all points coincide with the base; delta is zero");
  return d;
}

double evaluate_combination(const std::vector<Vector>& vs,
                            const Vector& coeffs, const NormSpec& n) {
  if (vs.size() != coeffs.size())
    throw LengthMismatch("coefficient count must match vector count");
  check_common_dim(vs);
  Vector z(vs.front().size(), 0.0);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < z.size(); ++j) z[j] += coeffs[i] * vs[i][j];
  return norm(z, n);
}

InnerSolution inner_unsigned_min(const std::vector<Vector>& vs,
                                 const NormSpec& n) {
  check_common_dim(vs);
  const SimplexMin sm = simplex_min(vs, n);
  InnerSolution sol;
  sol.mode = InnerMode::unsigned_simplex;
  sol.exactness = sm.exact ? Exactness::exact : Exactness::approximate;
  sol.coefficients = sm.weights;
  sol.value = evaluate_combination(vs, sol.coefficients, n);
  return sol;
}

namespace {

// Componentwise-equal or exactly-antipodal pair: the combination cancels
// exactly, which the iterative solvers can only approach.
bool exact_zero_pair(const std::vector<Vector>& vs, InnerSolution& out) {
  const std::size_t k = vs.size();
  if (k < 2) return false;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      bool equal = true, antipodal = true;
      for (std::size_t c = 0; c < vs[i].size(); ++c) {
        if (vs[i][c] != vs[j][c]) equal = false;
        if (vs[i][c] != -vs[j][c]) antipodal = false;
      }
      if (equal || antipodal) {
        out.value = 0.0;
        out.coefficients.assign(k, 0.0);
        out.coefficients[i] = 0.5;
        out.coefficients[j] = equal ? -0.5 : 0.5;
        out.mode = InnerMode::signed_l1_sphere;
        out.exactness = Exactness::exact;
        return true;
      }
    }
  return false;
}

InnerSolution signed_by_patterns(const std::vector<Vector>& vs,
                                 const NormSpec& n) {
  const std::size_t k = vs.size();
  if (k > kSignPatternCap)
    throw TooManyPoints("sign-pattern enumeration is capped at 16 points");
  InnerSolution best;
  if (exact_zero_pair(vs, best)) return best;

  bool all_exact = true;
  double best_value = std::numeric_limits<double>::infinity();
  Vector best_coeffs;
  std::vector<Vector> pts(vs);
  const std::uint32_t half = k == 1 ? 1u : (1u << (k - 1));
  std::vector<double> signs(k, 1.0);
  for (std::uint32_t bits = 0; bits < half; ++bits) {
    for (std::size_t i = 1; i < k; ++i) {
      const double s = ((bits >> (i - 1)) & 1u) ? -1.0 : 1.0;
      if (s != signs[i]) {
        signs[i] = s;
        for (std::size_t j = 0; j < vs[i].size(); ++j)
          pts[i][j] = s * vs[i][j];
      }
    }
    const SimplexMin sm = simplex_min(pts, n);
    all_exact = all_exact && sm.exact;
    if (sm.value < best_value) {
      best_value = sm.value;
      best_coeffs.assign(k, 0.0);
      for (std::size_t i = 0; i < k; ++i)
        best_coeffs[i] = signs[i] * sm.weights[i];
    }
  }
  best.mode = InnerMode::signed_l1_sphere;
  best.exactness = all_exact ? Exactness::exact : Exactness::approximate;
  best.coefficients = std::move(best_coeffs);
  best.value = evaluate_combination(vs, best.coefficients, n);
  return best;
}

InnerSolution signed_by_grid(const std::vector<Vector>& vs, const NormSpec& n,
                             std::size_t N) {
  const std::size_t k = vs.size();
  if (N == 0) throw OutOfRange("grid resolution must be positive");
  InnerSolution best;
  best.mode = InnerMode::signed_l1_sphere;
  best.exactness = Exactness::approximate;
  best.value = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> counts(k, 0);
  std::vector<double> a(k, 0.0);
  // Compositions of N, then sign choices on nonzero slots with the first
  // nonzero slot fixed positive (a -> -a symmetry).
  auto emit = [&] {
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < k; ++i)
      if (counts[i] > 0) nz.push_back(i);
    const std::size_t extra = nz.empty() ? 0 : nz.size() - 1;
    for (std::uint64_t bits = 0; bits < (1ull << extra); ++bits) {
      for (std::size_t i = 0; i < k; ++i)
        a[i] = static_cast<double>(counts[i]) / static_cast<double>(N);
      for (std::size_t t = 1; t < nz.size(); ++t)
        if ((bits >> (t - 1)) & 1ull) a[nz[t]] = -a[nz[t]];
      const double v = evaluate_combination(vs, Vector(a.begin(), a.end()), n);
      if (v < best.value) {
        best.value = v;
        best.coefficients.assign(a.begin(), a.end());
      }
    }
  };
  auto rec = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
    if (pos + 1 == k) {
      counts[pos] = remaining;
      emit();
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  rec(rec, 0, N);
  return best;
}

InnerSolution signed_by_subgradient(const std::vector<Vector>& vs,
                                    const NormSpec& n) {
  const std::size_t k = vs.size();
  InnerSolution best;
  if (exact_zero_pair(vs, best)) {
    best.exactness = Exactness::approximate;  // heuristic path never certifies
    return best;
  }
  best.mode = InnerMode::signed_l1_sphere;
  best.exactness = Exactness::approximate;
  best.value = std::numeric_limits<double>::infinity();

  SeededRng rng(0x5194ED);  // method takes no seed; fixed for determinism
  auto consider = [&](const Vector& a) {
    const double v = evaluate_combination(vs, a, n);
    if (v < best.value) {
      best.value = v;
      best.coefficients = a;
    }
  };
  const std::size_t restarts = 8;
  for (std::size_t r = 0; r < restarts; ++r) {
    Vector a(k);
    double sum = 0.0;
    for (auto& ai : a) {
      ai = rng.uniform(-1.0, 1.0);
      sum += std::fabs(ai);
    }
    if (sum == 0.0) {
      a[0] = 1.0;
      sum = 1.0;
    }
    for (auto& ai : a) ai /= sum;
    consider(a);
    for (std::size_t step = 1; step <= 200; ++step) {
      Vector z(vs.front().size(), 0.0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < z.size(); ++j) z[j] += a[i] * vs[i][j];
      const Vector u = lp_norm_subgradient(z, n);
      Vector g(k, 0.0);
      double gmax = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        g[i] = dot(u, vs[i]);
        gmax = std::max(gmax, std::fabs(g[i]));
      }
      if (gmax == 0.0) break;
      const double eta = 0.3 / (gmax * std::sqrt(static_cast<double>(step)));
      double s1 = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        a[i] -= eta * g[i];
        s1 += std::fabs(a[i]);
      }
      if (s1 == 0.0) break;
      for (auto& ai : a) ai /= s1;
      consider(a);
    }
  }
  return best;
}

}  // namespace

InnerSolution inner_signed_min(const std::vector<Vector>& vs,
                               const NormSpec& n, SignedMethod method,
                               std::size_t grid_n) {
  check_common_dim(vs);
  switch (method) {
    case SignedMethod::exact_sign_patterns:
      return signed_by_patterns(vs, n);
    case SignedMethod::subgradient:
      return signed_by_subgradient(vs, n);
    case SignedMethod::grid_oracle:
      return signed_by_grid(vs, n, grid_n);
  }
  throw Error("unreachable signed method");
}

namespace {

PerKRecord outer_record(const PressureQuery& q, std::size_t k, SearchMode mode,
                        bool signed_inner, bool distinct_only,
                        bool separated) {
  if (k < 1) throw OutOfRange("tuple size k must be >= 1");
  const double delta = resolve_delta(q);
  const PointSet normd = normalize_points(q.set, q.base, delta);
  const std::size_t m = normd.size();
  const NormSpec n = normd.norm;

  PerKRecord rec;
  rec.k = k;

  double eta_dist = 0.0;
  if (separated) {
    if (!q.eta) throw MissingEta("separated variant requires eta");
    if (!(*q.eta > 0.0 && *q.eta <= 1.0))
      throw OutOfRange("eta must lie in (0, 1]");
    eta_dist = *q.eta * delta - separation_slack(delta);
  }

  const bool use_distinct = distinct_only || (separated && k >= 2);
  if (use_distinct && k > m) {
    rec.value = 0.0;
    rec.bound_kind = BoundKind::exact;
    rec.admissible = false;
    return rec;
  }

  auto admissible_sep = [&](const std::vector<std::size_t>& idx) {
    if (!separated || k < 2) return true;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (distance(q.set.points[idx[a]], q.set.points[idx[b]], q.set.norm) <
            eta_dist)
          return false;
    return true;
  };

  auto eval_tuple = [&](const std::vector<std::size_t>& idx,
                        bool& exact) -> double {
    if (signed_inner && has_duplicate(idx)) {
      exact = true;  // opposite half-weights on the repeated point cancel
      return 0.0;
    }
    const auto sel = select(normd.points, idx);
    const InnerSolution sol =
        signed_inner ? inner_signed_min(sel, n, SignedMethod::exact_sign_patterns)
                     : inner_unsigned_min(sel, n);
    exact = sol.exactness == Exactness::exact;
    return sol.value;
  };

  if (mode == SearchMode::exhaustive || separated) {
    const std::uint64_t cap = q.search_budget;
    TupleBest best;
    if (separated && k >= 2) {
      const std::uint64_t total = binom_capped(m, k, cap);
      if (total > cap)
        throw BudgetExceeded("tuple enumeration exceeds the search budget");
      best = enumerate_best(
          total,
          [&](std::uint64_t r) { return unrank_combination(r, m, k, cap); },
          [&](std::vector<std::size_t>& t) { next_combination(t, m); },
          [&](const std::vector<std::size_t>& t, bool& exact) -> double {
            if (!admissible_sep(t)) {
              exact = true;
              return -1.0;  // sentinel: below every admissible value
            }
            return eval_tuple(t, exact);
          });
      if (!best.any || best.value < 0.0) {
        rec.value = 0.0;
        rec.bound_kind = BoundKind::exact;
        rec.admissible = false;
        return rec;
      }
    } else if (use_distinct) {
      const std::uint64_t total = binom_capped(m, k, cap);
      if (total > cap)
        throw BudgetExceeded("tuple enumeration exceeds the search budget");
      best = enumerate_best(
          total,
          [&](std::uint64_t r) { return unrank_combination(r, m, k, cap); },
          [&](std::vector<std::size_t>& t) { next_combination(t, m); },
          eval_tuple);
    } else {
      const std::uint64_t total = binom_capped(m + k - 1, k, cap);
      if (total > cap)
        throw BudgetExceeded("tuple enumeration exceeds the search budget");
      best = enumerate_best(
          total,
          [&](std::uint64_t r) { return unrank_multiset(r, m, k, cap); },
          [&](std::vector<std::size_t>& t) { next_multiset(t, m); },
          eval_tuple);
    }
    rec.value = best.any ? best.value : 0.0;
    rec.witness = best.tuple;
    rec.bound_kind = best.all_exact ? BoundKind::exact : BoundKind::lower_bound;
    rec.admissible = best.any;
    return rec;
  }

  // Seeded stochastic search: certified lower bound on the supremum.
  SearchConfig cfg{m, k, !use_distinct};
  const TupleBest best = hill_climb(cfg, q.search_budget, q.seed, eval_tuple);
  rec.value = best.any ? best.value : 0.0;
  rec.witness = best.tuple;
  rec.bound_kind = BoundKind::lower_bound;
  rec.admissible = best.any;
  return rec;
}

}  // namespace

PerKRecord phi_k(const PressureQuery& q, std::size_t k, SearchMode mode) {
  return outer_record(q, k, mode, /*signed_inner=*/true,
                      /*distinct_only=*/false, /*separated=*/false);
}

PerKRecord psi_k(const PressureQuery& q, std::size_t k, SearchMode mode) {
  return outer_record(q, k, mode, /*signed_inner=*/false,
                      /*distinct_only=*/true, /*separated=*/false);
}

PerKRecord phi_k_separated(const PressureQuery& q, std::size_t k) {
  return outer_record(q, k, SearchMode::exhaustive, /*signed_inner=*/true,
                      /*distinct_only=*/false, /*separated=*/true);
}

PressureReport pressure_P(const PressureQuery& q, Variant variant,
                          SearchMode mode) {
  if (q.k_max < 1) throw OutOfRange("k_max must be >= 1");
  PressureReport rep;
  const std::size_t m = q.set.size();
  for (std::size_t k = 1; k <= q.k_max; ++k) {
    if (variant == Variant::signed_l1 && k > m) {
      // Any k-tuple from m points repeats one; half-weights of opposite sign
      // on the repeat cancel exactly, so the supremum is zero.
      PerKRecord rec;
      rec.k = k;
      rec.value = 0.0;
      rec.witness.assign(k, 0);
      rec.bound_kind = BoundKind::exact;
      rec.admissible = true;
      rep.per_k.push_back(std::move(rec));
      rep.exact_zero_rule_applied = true;
      continue;
    }
    switch (variant) {
      case Variant::signed_l1:
        rep.per_k.push_back(phi_k(q, k, mode));
        break;
      case Variant::unsigned_weights:
        rep.per_k.push_back(psi_k(q, k, mode));
        break;
      case Variant::separated:
        rep.per_k.push_back(phi_k_separated(q, k));
        break;
    }
  }
  rep.truncated_inf = rep.per_k.front().value;
  for (const auto& rec : rep.per_k)
    rep.truncated_inf = std::min(rep.truncated_inf, rec.value);
  return rep;
}

HypothesisRecord hypothesis_H_l1(const PressureQuery& q, double eps,
                                 std::size_t k,
                                 const std::vector<std::vector<Vector>>& tuples) {
  if (!(eps > 0.0)) throw OutOfRange("threshold eps must be positive");
  HypothesisRecord rec;
  rec.min_value = std::numeric_limits<double>::infinity();
  if (tuples.empty()) return rec;  // vacuously holds
  const double delta = resolve_delta(q);
  for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
    const auto& tuple = tuples[ti];
    if (tuple.size() != k)
      throw LengthMismatch("tuple size does not match k");
    std::vector<Vector> normd;
    normd.reserve(k);
    for (const auto& p : tuple) {
      if (p.size() != q.base.size())
        throw DimMismatch("tuple point dimension mismatch");
      Vector v(p.size());
      for (std::size_t j = 0; j < p.size(); ++j)
        v[j] = (p[j] - q.base[j]) / delta;
      normd.push_back(std::move(v));
    }
    const InnerSolution sol = inner_signed_min(
        normd, q.set.norm, SignedMethod::exact_sign_patterns);
    if (sol.value < rec.min_value) rec.min_value = sol.value;
    if (sol.value < eps && !rec.violator) {
      rec.violator = ti;
      rec.holds = false;
    }
  }
  return rec;
}

}  // namespace fpp::pressure
