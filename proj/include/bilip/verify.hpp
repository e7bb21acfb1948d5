#pragma once

// Sampling-based distortion audits, designated-point exactness checks, and
// the brute-force oracle for routing schedules. Sampling can never certify a
// global bilipschitz constant; reports state a sampled lower bound on the
// true constant against the certified upper bound.

#include "bilip/map_expr.hpp"
#include "bilip/routing.hpp"

namespace bilip {

// Relative slack applied when comparing sampled ratios to certified bounds.
inline constexpr double kBoundSlack = 1e-6;
// Absolute tolerance for designated-point residuals.
inline constexpr double kDesignatedTol = 1e-9;

struct AuditReport {
  std::string map_id;
  double sampled_expansion_log2 = 0;    // max log2 ratio over sampled pairs
  double sampled_contraction_log2 = 0;  // max log2 inverse ratio
  double certified_log2 = 0;
  int pairs = 0;
  uint64_t seed = 0;
  double max_designated_residual = 0;
  int designated_count = 0;
  double max_support_violation = 0;  // displacement of sampled points outside the support
  int support_samples = 0;
  bool bound_ok = true;
  bool designated_ok = true;
  bool support_ok = true;

  bool pass() const { return bound_ok && designated_ok && support_ok; }
};

// Seeded pair sampling with three mixed strategies: uniform pairs,
// short-range pairs (about 1e-3 of the region diameter) and anchor pairs.
AuditReport sampled_bilip(const MapExpr& m, const Box& region, int n_pairs, uint64_t seed,
                          const std::vector<Vec>& anchors = {});

struct PointMapPair {
  Vec source;
  Vec image;
};

// Residuals |m(source) - image| for every designated pair; the caller
// compares against its tolerance (kDesignatedTol by default elsewhere).
std::vector<double> check_designated(const MapExpr& m, const std::vector<PointMapPair>& pairs);

// Fills the designated fields of a report in place.
void audit_designated(AuditReport& rep, const MapExpr& m, const std::vector<PointMapPair>& pairs,
                      double tol = kDesignatedTol);

// Checks that sampled points outside `support` are fixed exactly.
void audit_support(AuditReport& rep, const MapExpr& m, const Box& support, const Box& sample_region,
                   int n_samples, uint64_t seed, double tol = 1e-12);

// Applies the schedule to the identity arrangement and verifies it realizes
// the permutation; also checks per-round disjointness and exact adjacency.
// Returns false and fills `why` (when given) on the first violation.
bool schedule_oracle(const LatticePerm& perm, const RoutingSchedule& sched, std::string* why = nullptr);

}  // namespace bilip
