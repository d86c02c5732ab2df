#include "omsid/recover.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace omsid;

namespace {

void check_round_trip(const DriftCoeffs& beta, double eps, bool eps_known,
                      double tol) {
  const ElCoeffs b = structure_map(beta, eps);
  const RecoveredModel rec = findbeta1(b);
  CAPTURE(beta.transpose());
  CAPTURE(eps);
  CHECK_FALSE(rec.beta0_sentinel);
  CHECK((rec.beta - beta).cwiseAbs().maxCoeff() <= tol);
  if (eps_known) {
    CHECK_FALSE(rec.epsilon_sentinel);
    CHECK(std::abs(rec.epsilon - eps) <= tol);
  } else {
    CHECK(rec.epsilon_sentinel);
    CHECK(rec.epsilon == kSentinel);
  }
}

}  // namespace

TEST_CASE("findbeta1 on the zero vector marks both unknowns") {
  const RecoveredModel rec = findbeta1(ElCoeffs::Zero());
  CHECK(rec.beta0_sentinel);
  CHECK(rec.beta[0] == kSentinel);
  for (int i = 1; i < kDriftDim; ++i) CHECK(rec.beta[i] == 0.0);
  CHECK(rec.epsilon_sentinel);
  CHECK(rec.epsilon == kSentinel);
}

TEST_CASE("findbeta1 inverts the named models exactly") {
  check_round_trip(testutil::case_i(), 0.8, true, 1e-12);
  check_round_trip(testutil::case_ii(), 0.8, true, 1e-12);
  check_round_trip(testutil::case_iii(), 0.8, true, 1e-12);
}

TEST_CASE("findbeta1 inverts every polynomial-head branch") {
  for (int head = 5; head >= 2; --head) {
    CAPTURE(head);
    testutil::BranchSampler sampler(5000 + head);
    for (int rep = 0; rep < 50; ++rep) {
      const testutil::BranchDraw d = sampler.poly_head(head);
      check_round_trip(d.beta, d.eps, d.eps_identified, 1e-8);
    }
  }
}

TEST_CASE("findbeta1 on a linear-head drift recovers beta but not eps") {
  testutil::BranchSampler sampler(61);
  for (int rep = 0; rep < 50; ++rep) {
    testutil::BranchDraw d = sampler.poly_head(1);
    if (rep % 2 == 0) d.beta.segment<4>(6).setZero();  // purely linear half
    const ElCoeffs b = structure_map(d.beta, d.eps);
    const RecoveredModel rec = findbeta1(b);
    CHECK((rec.beta - d.beta).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK_FALSE(rec.beta0_sentinel);
    CHECK(rec.epsilon_sentinel);
    CHECK(rec.epsilon == kSentinel);
  }
}

TEST_CASE("findbeta1 inverts the trigonometric branches") {
  const char* kinds[] = {"b4c",     "b4s-pos", "b4s-neg",
                         "b2c",     "b2s-pos", "b2s-neg"};
  for (const char* kind : kinds) {
    CAPTURE(kind);
    testutil::BranchSampler sampler(77);
    for (int rep = 0; rep < 50; ++rep) {
      const testutil::BranchDraw d = sampler.trig(kind);
      check_round_trip(d.beta, d.eps, d.eps_identified, 1e-8);
    }
  }
}

TEST_CASE("findbeta1 canonicalizes the sign degeneracy to eps^2 >= 0") {
  // (beta, eps^2) and (-beta, -eps^2) produce the same expansion; the
  // recovered representative must be the one with real eps.
  testutil::BranchSampler sampler(88);
  const testutil::BranchDraw d = sampler.poly_head(3);
  const ElCoeffs b_pos = structure_map(d.beta, d.eps);
  const ElCoeffs b_neg =
      detail::structure_map_eps_sq(-d.beta, -(d.eps * d.eps));
  CHECK((b_pos - b_neg).cwiseAbs().maxCoeff() <= 1e-12);
  const RecoveredModel rec = findbeta1(b_neg);
  CHECK((rec.beta - d.beta).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(std::abs(rec.epsilon - d.eps) <= 1e-8);
}

TEST_CASE("findbeta0 with a dense prior reproduces findbeta1") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    ElCoeffs b;
    for (int i = 0; i < kElDim; ++i) b[i] = u(gen);
    b[9] = std::abs(b[9]) + 0.5;  // give the cascade a definite head
    const RecoveredModel free = findbeta1(b);
    const RecoveredModel pinned = findbeta0(b, DriftCoeffs::Constant(1.0));
    CHECK((free.beta - pinned.beta).cwiseAbs().maxCoeff() == 0.0);
    CHECK(free.epsilon == pinned.epsilon);
    CHECK(free.beta0_sentinel == pinned.beta0_sentinel);
    CHECK(free.epsilon_sentinel == pinned.epsilon_sentinel);
  }
}

TEST_CASE("findbeta0 honors the pinned pattern") {
  testutil::BranchSampler sampler(17);
  for (int rep = 0; rep < 50; ++rep) {
    testutil::BranchDraw d = sampler.poly_head(4);
    // knock out a couple of coordinates so the prior has real zeros
    d.beta[2] = 0.0;
    d.beta[7] = 0.0;
    const ElCoeffs b = structure_map(d.beta, d.eps);
    const RecoveredModel rec = findbeta0(b, d.beta);
    CHECK((rec.beta - d.beta).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(std::abs(rec.epsilon - d.eps) <= 1e-8);
    CHECK(rec.beta[2] == 0.0);
    CHECK(rec.beta[7] == 0.0);
  }
}

TEST_CASE("findbeta0 zero pins survive arbitrary expansion input") {
  std::mt19937_64 gen(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    ElCoeffs b;
    for (int i = 0; i < kElDim; ++i) b[i] = u(gen);
    DriftCoeffs prior;
    for (int i = 0; i < kDriftDim; ++i) {
      prior[i] = (u(gen) > 0.0) ? 1.0 : 0.0;
    }
    const RecoveredModel rec = findbeta0(b, prior);
    for (int i = 1; i < kDriftDim; ++i) {
      if (prior[i] == 0.0) CHECK(rec.beta[i] == 0.0);
    }
    if (prior[0] == 0.0) {
      CHECK((rec.beta[0] == 0.0 || rec.beta0_sentinel));
    }
  }
}

TEST_CASE("findbeta0 with an all-zero prior") {
  const ElCoeffs b = structure_map(testutil::case_ii(), 0.8);
  const RecoveredModel rec = findbeta0(b, DriftCoeffs::Zero());
  CHECK(rec.beta.cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(rec.beta0_sentinel);  // beta[0] pinned to a real zero
  CHECK(rec.epsilon_sentinel);
  CHECK(rec.epsilon == kSentinel);
}

TEST_CASE("findbeta0 case I with its own support pinned") {
  const DriftCoeffs beta = testutil::case_i();
  const ElCoeffs b = structure_map(beta, 0.8);
  const RecoveredModel rec = findbeta0(b, beta);
  CHECK((rec.beta - beta).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(rec.epsilon - 0.8) <= 1e-12);
}

TEST_CASE("hard_threshold") {
  DriftCoeffs beta = DriftCoeffs::Zero();
  beta[0] = 0.04;
  beta[1] = -0.04;
  beta[3] = 0.05;
  beta[5] = -1.2;
  beta[8] = 0.2;

  const DriftCoeffs cut = hard_threshold(beta, 0.05);
  CHECK(cut[0] == 0.0);
  CHECK(cut[1] == 0.0);
  CHECK(cut[3] == 0.05);  // |beta| == theta survives: the cut is strict
  CHECK(cut[5] == -1.2);
  CHECK(cut[8] == 0.2);

  // idempotent
  const DriftCoeffs cut2 = hard_threshold(cut, 0.05);
  CHECK((cut2 - cut).cwiseAbs().maxCoeff() == 0.0);

  // theta = 0 removes nothing
  CHECK((hard_threshold(beta, 0.0) - beta).cwiseAbs().maxCoeff() == 0.0);
}
