#include <doctest.h>

#include "bilip/swaps.hpp"
#include "bilip/verify.hpp"

using namespace bilip;

TEST_CASE("sampled_bilip: identity and pure scaling") {
  Box box(Vec{-2, -2}, Vec{2, 2});
  AuditReport id = sampled_bilip(identity_map(2), box, 5000, 7);
  CHECK(std::abs(id.sampled_expansion_log2) <= 1e-9);
  CHECK(std::abs(id.sampled_contraction_log2) <= 1e-9);
  CHECK(id.bound_ok);

  AuditReport sc = sampled_bilip(uniform_scale(2, 2.0), box, 5000, 7);
  CHECK(sc.sampled_expansion_log2 == doctest::Approx(1.0));
  CHECK(sc.sampled_contraction_log2 == doctest::Approx(-1.0));
  CHECK(sc.bound_ok);

  CHECK_THROWS_AS(sampled_bilip(identity_map(2), Box(Vec{0, 0}, Vec{0, 0}), 10, 1), ValidationError);
}

TEST_CASE("sampled_bilip is deterministic given the seed") {
  SwapSpec spec{Vec{0.5, 0}, Vec{-0.5, 0}, 0.5};
  MapExpr tau = swap_map(spec);
  Box box(Vec{-2, -2}, Vec{2, 2});
  AuditReport a = sampled_bilip(tau, box, 4000, 42, {spec.x, spec.y});
  AuditReport b = sampled_bilip(tau, box, 4000, 42, {spec.x, spec.y});
  CHECK(a.sampled_expansion_log2 == b.sampled_expansion_log2);
  CHECK(a.sampled_contraction_log2 == b.sampled_contraction_log2);
  // The swap's sampled distortion stays within log2(16) = 4.
  CHECK(a.sampled_expansion_log2 <= 4.0 + 1e-6);
  CHECK(a.sampled_contraction_log2 <= 4.0 + 1e-6);
  CHECK(a.bound_ok);
}

TEST_CASE("check_designated and support audits catch corruption") {
  SwapSpec spec{Vec{0.5, 0}, Vec{-0.5, 0}, 0.5};
  MapExpr tau = swap_map(spec);
  AuditReport rep;
  rep.certified_log2 = tau->bound.bilip_log2();
  audit_designated(rep, tau, {{spec.x, spec.y}, {spec.y, spec.x}});
  CHECK(rep.designated_ok);
  CHECK(rep.max_designated_residual <= 1e-9);

  // A deliberately wrong image registers a residual.
  audit_designated(rep, tau, {{spec.x, spec.x}});
  CHECK_FALSE(rep.designated_ok);
  CHECK(rep.max_designated_residual == doctest::Approx(1.0));

  audit_support(rep, tau, *tau->support, Box(Vec{-4, -4}, Vec{4, 4}), 3000, 11);
  CHECK(rep.support_ok);
  CHECK(rep.max_support_violation == 0.0);

  // Against a translation, support sampling reports violations.
  audit_support(rep, translation(Vec{1, 0}), Box(Vec{-0.1, -0.1}, Vec{0.1, 0.1}),
                Box(Vec{-4, -4}, Vec{4, 4}), 200, 11);
  CHECK_FALSE(rep.support_ok);
}
