#include "omsid/solve.hpp"

#include "omsid/design.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace omsid;

namespace {

// Tall random system with a planted coefficient vector.
struct RandomSystem {
  Eigen::MatrixXd theta;
  Eigen::VectorXd zdd;
};

RandomSystem make_system(int rows, std::uint64_t seed, const ElCoeffs& b) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RandomSystem s;
  s.theta.resize(rows, kElDim);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < kElDim; ++j) s.theta(i, j) = u(gen);
  }
  s.zdd = s.theta * b;
  return s;
}

}  // namespace

TEST_CASE("initial_ls recovers a planted vector from a full-rank tall system") {
  ElCoeffs b = ElCoeffs::Zero();
  b[1] = -2.054;
  b[3] = -2.4;
  b[5] = 4.32;
  b[13] = 0.75;
  const RandomSystem s = make_system(120, 11, b);
  const ElCoeffs got = initial_ls(s.theta, s.zdd);
  CHECK((got - b).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("initial_ls returns the minimum-norm solution when rank-deficient") {
  // Two identical columns sharing weight 1: min-norm splits it evenly.
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(6, kElDim);
  for (int i = 0; i < 6; ++i) {
    theta(i, 4) = static_cast<double>(i + 1);
    theta(i, 20) = static_cast<double>(i + 1);
  }
  Eigen::VectorXd zdd(6);
  for (int i = 0; i < 6; ++i) zdd[i] = static_cast<double>(i + 1);
  const ElCoeffs got = initial_ls(theta, zdd);
  CHECK(got[4] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(got[20] == doctest::Approx(0.5).epsilon(1e-12));
  for (int i = 0; i < kElDim; ++i) {
    if (i != 4 && i != 20) CHECK(std::abs(got[i]) <= 1e-12);
  }
}

TEST_CASE("ridge_update scalar fixtures") {
  // One active column [1;1], zdd = [1;1]: normal equation (2 + k) u = 2 + k1 g.
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(2, kElDim);
  theta(0, 7) = 1.0;
  theta(1, 7) = 1.0;
  Eigen::VectorXd zdd(2);
  zdd << 1.0, 1.0;
  SupportMask support;
  support.on[7] = true;

  SUBCASE("pull toward zero prior") {
    const ElCoeffs u =
        ridge_update(theta, zdd, ElCoeffs::Zero(), support, 0.5, 0.5);
    CHECK(u[7] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("pull toward a nonzero prior") {
    ElCoeffs gb = ElCoeffs::Zero();
    gb[7] = 3.0;
    const ElCoeffs u = ridge_update(theta, zdd, gb, support, 1.0, 0.0);
    CHECK(u[7] == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("off-support stays exactly zero") {
    ElCoeffs gb = ElCoeffs::Constant(2.0);
    const ElCoeffs u = ridge_update(theta, zdd, gb, support, 0.3, 0.1);
    for (int i = 0; i < kElDim; ++i) {
      if (i != 7) CHECK(u[i] == 0.0);
    }
  }
}

TEST_CASE("ridge_update with empty support returns zero") {
  const RandomSystem s = make_system(30, 5, ElCoeffs::Constant(0.2));
  const ElCoeffs u = ridge_update(s.theta, s.zdd, ElCoeffs::Zero(),
                                  SupportMask{}, 0.1, 0.1);
  CHECK(u.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ridge_update at k1 = k2 = 0 equals least squares on the support") {
  ElCoeffs b = ElCoeffs::Zero();
  b[2] = 1.5;
  b[11] = -0.4;
  b[30] = 0.9;
  const RandomSystem s = make_system(80, 21, b);
  const SupportMask support = SupportMask::from_nonzeros(b);
  const ElCoeffs u =
      ridge_update(s.theta, s.zdd, ElCoeffs::Zero(), support, 0.0, 0.0);
  CHECK((u - b).cwiseAbs().maxCoeff() <= 1e-9);

  const ElCoeffs dense = initial_ls(s.theta, s.zdd);
  const ElCoeffs all =
      ridge_update(s.theta, s.zdd, ElCoeffs::Zero(), SupportMask::all(), 0.0,
                   0.0);
  CHECK((dense - all).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("ridge_update dense and gram paths agree") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    ElCoeffs b = ElCoeffs::Zero();
    SupportMask support;
    for (int i = 0; i < kElDim; ++i) {
      if (u(gen) > 0.2) {
        b[i] = u(gen);
        support.on[i] = true;
      }
    }
    const RandomSystem s = make_system(60, 1000 + rep, b);
    ElCoeffs gb;
    for (int i = 0; i < kElDim; ++i) gb[i] = u(gen);
    const double k1 = 0.05 + 0.2 * std::abs(u(gen));
    const double k2 = 0.05 + 0.2 * std::abs(u(gen));

    const Eigen::MatrixXd gram = s.theta.transpose() * s.theta;
    const Eigen::VectorXd rhs = s.theta.transpose() * s.zdd;
    const ElCoeffs a = ridge_update(s.theta, s.zdd, gb, support, k1, k2);
    const ElCoeffs c = ridge_update_gram(gram, rhs, gb, support, k1, k2);
    CHECK((a - c).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + a.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("ridge_update satisfies the stationarity condition") {
  // grad = 2 theta_S'(theta_S u - zdd) + 2 k1 (u - gb_S) + 2 k2 u == 0
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int rep = 0; rep < 8; ++rep) {
    const RandomSystem s = make_system(50, 300 + rep, ElCoeffs::Constant(0.1));
    SupportMask support;
    std::vector<int> idx;
    for (int i = 0; i < kElDim; ++i) {
      if (ud(gen) > -0.4) {
        support.on[i] = true;
        idx.push_back(i);
      }
    }
    ElCoeffs gb;
    for (int i = 0; i < kElDim; ++i) gb[i] = ud(gen);
    const double k1 = 0.3 * std::abs(ud(gen));
    const double k2 = 0.3 * std::abs(ud(gen));
    const ElCoeffs sol = ridge_update(s.theta, s.zdd, gb, support, k1, k2);

    const double scale = 1.0 + (s.theta.transpose() * s.zdd).cwiseAbs().maxCoeff();
    const Eigen::VectorXd resid = s.theta * sol - s.zdd;
    for (int i : idx) {
      const double g = 2.0 * s.theta.col(i).dot(resid) +
                       2.0 * k1 * (sol[i] - gb[i]) + 2.0 * k2 * sol[i];
      CHECK(std::abs(g) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("increasing k2 never increases the solution norm") {
  ElCoeffs b = ElCoeffs::Zero();
  b[1] = 1.0;
  b[6] = -2.0;
  b[19] = 0.7;
  const RandomSystem s = make_system(70, 55, b);
  const SupportMask support = SupportMask::from_nonzeros(b);
  double prev = std::numeric_limits<double>::infinity();
  for (double k2 : {0.0, 0.01, 0.1, 1.0, 10.0}) {
    const ElCoeffs u =
        ridge_update(s.theta, s.zdd, ElCoeffs::Zero(), support, 0.0, k2);
    const double norm = u.norm();
    CHECK(norm <= prev + 1e-12);
    prev = norm;
  }
}

TEST_CASE("ridge_update matches a projected-gradient reference solver") {
  std::mt19937_64 gen(1234);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    ElCoeffs b = ElCoeffs::Zero();
    SupportMask support;
    for (int i = 0; i < kElDim; ++i) {
      if (ud(gen) > 0.0) {
        b[i] = ud(gen);
        support.on[i] = true;
      }
    }
    const RandomSystem s = make_system(40, 9000 + rep, b);
    ElCoeffs gb;
    for (int i = 0; i < kElDim; ++i) gb[i] = 0.5 * ud(gen);
    const double k1 = 0.05 + 0.45 * std::abs(ud(gen));
    const double k2 = 0.05 + 0.45 * std::abs(ud(gen));

    const ElCoeffs fast = ridge_update(s.theta, s.zdd, gb, support, k1, k2);
    const ElCoeffs slow =
        testutil::pgd_ridge(s.theta, s.zdd, gb, support, k1, k2);
    CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-6);
  }
}
