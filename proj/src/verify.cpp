#include "bilip/verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <thread>

#include "bilip/rng.hpp"

namespace bilip {

namespace {
int worker_count() {
  const char* env = std::getenv("BILIP_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n < 1 ? 1 : n;
}
}  // namespace

AuditReport sampled_bilip(const MapExpr& m, const Box& region, int n_pairs, uint64_t seed,
                          const std::vector<Vec>& anchors) {
  require(n_pairs >= 1, "sampled_bilip: need at least one pair");
  require(region.dim() == m->dim, "sampled_bilip: region dimension mismatch");
  require(region.bounded() && region.diameter() > 0, "sampled_bilip: degenerate region");

  AuditReport rep;
  rep.pairs = n_pairs;
  rep.seed = seed;
  rep.certified_log2 = m->bound.bilip_log2();

  const double diam = region.diameter();
  const int d = m->dim;

  // Pre-draw the pair list so the sample set is independent of the worker
  // count, then scan it in parallel chunks.
  std::vector<std::pair<Vec, Vec>> samples;
  samples.reserve(static_cast<size_t>(n_pairs));
  Rng rng(seed);
  for (int i = 0; i < n_pairs; ++i) {
    int strategy = i % 3;
    Vec p, q;
    if (strategy == 2 && !anchors.empty()) {
      p = anchors[static_cast<size_t>(rng.uniform_int(0, static_cast<long long>(anchors.size()) - 1))];
      q = (i % 2 == 0) ? rng.in_box(region)
                       : anchors[static_cast<size_t>(rng.uniform_int(0, static_cast<long long>(anchors.size()) - 1))];
    } else if (strategy == 1) {
      p = rng.in_box(region);
      q = p + rng.unit_vec(d) * (1e-3 * diam);
    } else {
      p = rng.in_box(region);
      q = rng.in_box(region);
    }
    if (p.dist(q) < 1e-12 * diam) q = p + rng.unit_vec(d) * (1e-6 * diam);
    samples.push_back({p, q});
  }

  const int workers = std::min(worker_count(), n_pairs);
  std::vector<double> exp_max(static_cast<size_t>(workers), -1e300);
  std::vector<double> con_max(static_cast<size_t>(workers), -1e300);
  auto scan = [&](int w) {
    size_t lo = static_cast<size_t>(w) * samples.size() / static_cast<size_t>(workers);
    size_t hi = static_cast<size_t>(w + 1) * samples.size() / static_cast<size_t>(workers);
    for (size_t i = lo; i < hi; ++i) {
      const auto& [p, q] = samples[i];
      double num = evaluate(m, p).dist(evaluate(m, q));
      double den = p.dist(q);
      if (den <= 0 || num <= 0) continue;
      double r = std::log2(num) - std::log2(den);
      exp_max[static_cast<size_t>(w)] = std::max(exp_max[static_cast<size_t>(w)], r);
      con_max[static_cast<size_t>(w)] = std::max(con_max[static_cast<size_t>(w)], -r);
    }
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(scan, w);
    for (auto& t : pool) t.join();
  }
  rep.sampled_expansion_log2 = *std::max_element(exp_max.begin(), exp_max.end());
  rep.sampled_contraction_log2 = *std::max_element(con_max.begin(), con_max.end());

  const double slack = std::log2(1.0 + kBoundSlack);
  rep.bound_ok = rep.sampled_expansion_log2 <= rep.certified_log2 + slack &&
                 rep.sampled_contraction_log2 <= rep.certified_log2 + slack;
  return rep;
}

std::vector<double> check_designated(const MapExpr& m, const std::vector<PointMapPair>& pairs) {
  std::vector<double> residuals;
  residuals.reserve(pairs.size());
  for (const PointMapPair& pm : pairs) residuals.push_back(evaluate(m, pm.source).dist(pm.image));
  return residuals;
}

void audit_designated(AuditReport& rep, const MapExpr& m, const std::vector<PointMapPair>& pairs, double tol) {
  rep.designated_count = static_cast<int>(pairs.size());
  rep.max_designated_residual = 0;
  for (double r : check_designated(m, pairs))
    rep.max_designated_residual = std::max(rep.max_designated_residual, r);
  rep.designated_ok = rep.max_designated_residual <= tol;
}

void audit_support(AuditReport& rep, const MapExpr& m, const Box& support, const Box& sample_region,
                   int n_samples, uint64_t seed, double tol) {
  Rng rng(seed);
  rep.support_samples = n_samples;
  rep.max_support_violation = 0;
  int produced = 0;
  int attempts = 0;
  while (produced < n_samples && attempts < 64 * n_samples) {
    ++attempts;
    Vec p = rng.in_box(sample_region);
    if (support.contains(p, 0.0)) continue;
    ++produced;
    double d = evaluate(m, p).dist(p);
    rep.max_support_violation = std::max(rep.max_support_violation, d);
  }
  rep.support_samples = produced;
  rep.support_ok = rep.max_support_violation <= tol;
}

bool schedule_oracle(const LatticePerm& perm, const RoutingSchedule& sched, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (perm.dim != sched.dim && !sched.rounds.empty()) return fail("dimension mismatch");
  if (perm.N != sched.N && !sched.rounds.empty()) return fail("lattice scale mismatch");

  // Trajectory map over every point touched by the permutation or schedule.
  std::map<IVec, IVec> pos;    // start -> current position
  std::map<IVec, IVec> where;  // current position -> start
  auto track = [&](const IVec& p) {
    if (!where.count(p)) {
      where[p] = p;
      pos[p] = p;
    }
  };
  for (const auto& [s, d] : perm.pairs) {
    track(s);
    track(d);
  }

  for (size_t t = 0; t < sched.rounds.size(); ++t) {
    std::set<IVec> seen;
    for (const auto& [a, b] : sched.rounds[t]) {
      if (a == b) return fail("round " + std::to_string(t) + " contains a degenerate pair");
      long long l1 = 0;
      for (int i = 0; i < a.dim(); ++i) l1 += std::llabs(a[i] - b[i]);
      if (l1 != 1) return fail("round " + std::to_string(t) + " pair is not grid-adjacent");
      if (!seen.insert(a).second || !seen.insert(b).second)
        return fail("round " + std::to_string(t) + " has overlapping pairs");
      track(a);
      track(b);
      IVec pa = where[a], pb = where[b];
      where[a] = pb;
      where[b] = pa;
      pos[pb] = a;
      pos[pa] = b;
    }
  }

  std::map<IVec, IVec> target = perm.as_map();
  for (const auto& [start, cur] : pos) {
    IVec want = target.count(start) ? target[start] : start;
    if (!(cur == want)) {
      return fail("composition mismatch: a point does not reach its image");
    }
  }
  return true;
}

}  // namespace bilip
