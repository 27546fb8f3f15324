#include <gtest/gtest.h>

#include <random>

#include "anholo/error.hpp"
#include "anholo/floquet.hpp"
#include "support.hpp"

using namespace anholo;
using anholo::testing::random_hermitian;
using anholo::testing::random_state;
using anholo::testing::taylor_exp;
using anholo::testing::unitary2_angles;

namespace {

CMatrix lz_hamiltonian(double s) {
  // (1 - s)(1 - X)/2 + s |1><1|
  return CMatrix{{0.5 * (1.0 - s), -0.5 * (1.0 - s)}, {-0.5 * (1.0 - s), 0.5 * (1.0 - s) + s}};
}

SaqcProblem lz_problem(double t_max) {
  return {lz_hamiltonian, 1.0, [t_max](double t) { return t / t_max; }, t_max};
}

CVector evolve(const std::vector<CMatrix>& steps, CVector psi) {
  for (const auto& u : steps) psi = u * psi;
  return psi;
}

}  // namespace

TEST(Floquet, KickOperatorClosedForm) {
  const CVector v = CVector{1.0, Complex(0.0, 1.0), 1.0}.normalized();
  EXPECT_LT(max_abs_diff(kick_operator(v, 0.0), CMatrix::identity(3)), 1e-15);
  EXPECT_LT(max_abs_diff(kick_operator(v, kTwoPi), CMatrix::identity(3)), 1e-15);
  const CMatrix flip = kick_operator(CVector::basis(3, 0), kPi);
  const Complex diag[] = {-1.0, 1.0, 1.0};
  EXPECT_LT(max_abs_diff(flip, CMatrix::diagonal(std::span<const Complex>(diag))), 1e-15);
  // Matches the exponential of the rank-1 generator.
  EXPECT_LT(max_abs_diff(kick_operator(v, 1.1), taylor_exp(projector(v), 1.1)), 1e-12);
  try {
    kick_operator(CVector{1.0, 1.0}, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnnormalizedVector);
  }
}

TEST(Floquet, ApplyKickMatchesMatrix) {
  std::mt19937_64 rng(21);
  const CVector v = random_state(rng, 6);
  CVector psi = random_state(rng, 6);
  const CVector expected = kick_operator(v, 2.3) * psi;
  apply_kick(v, 2.3, psi.span());
  EXPECT_LT(max_abs_diff(psi, expected), 1e-14);
}

TEST(Floquet, OperatorAtZeroIsUnperturbed) {
  std::mt19937_64 rng(22);
  const FloquetSystem sys(random_hermitian(rng, 4), random_state(rng, 4), 0.7);
  EXPECT_LT(max_abs_diff(sys.at(0.0), sys.unperturbed()), 1e-15);
  EXPECT_LT(max_abs_diff(sys.unperturbed(), taylor_exp(sys.h0(), 0.7)), 1e-10);
}

TEST(Floquet, TwoLevelEigenanglesAtHalfPeriod) {
  const double diag[] = {0.0, kTwoPi / 3.0};
  const FloquetSystem sys(CMatrix::diagonal(std::span<const double>(diag)), CVector{1.0, 1.0}.normalized(), 1.0);
  const auto angles = unitary2_angles(sys.at(kPi));
  EXPECT_NEAR(angles[0], kPi / 3.0, 1e-12);
  EXPECT_NEAR(angles[1], 4.0 * kPi / 3.0, 1e-12);
}

TEST(Floquet, PeriodicityUnitarityDeterminant) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> us(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const FloquetSystem sys(random_hermitian(rng, n), random_state(rng, n), 0.5 + 0.01 * trial);
    const double s = us(rng);
    const CMatrix u = sys.at(s);
    EXPECT_LT(max_abs_diff(u, sys.at(s + kTwoPi)), 1e-12);
    EXPECT_TRUE(is_unitary(u, 1e-10));
    EXPECT_NEAR(std::abs(determinant(u)), 1.0, 1e-10);
  }
}

TEST(Floquet, ApplyMatchesDenseOperator) {
  std::mt19937_64 rng(24);
  const FloquetSystem sys(random_hermitian(rng, 5), random_state(rng, 5), 1.2);
  CVector psi = random_state(rng, 5);
  const CVector expected = sys.at(0.9) * psi;
  sys.apply(0.9, psi.span());
  EXPECT_LT(max_abs_diff(psi, expected), 1e-13);
}

TEST(Floquet, ConstructorValidation) {
  const CVector v{1.0, 0.0};
  EXPECT_THROW(FloquetSystem(CMatrix::identity(2), v, 0.0), Error);
  EXPECT_THROW(FloquetSystem(CMatrix::identity(3), v, 1.0), Error);
  try {
    FloquetSystem(CMatrix{{0.0, 1.0}, {0.0, 0.0}}, v, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonHermitian);
  }
  try {
    FloquetSystem(CMatrix::identity(2), CVector{1.0, 1.0}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnnormalizedVector);
  }
}

TEST(Discretize, ConstantHamiltonianComposesExactly) {
  std::mt19937_64 rng(25);
  const CMatrix h = random_hermitian(rng, 3);
  const SaqcProblem p{[&](double) { return h; }, 1.0, [](double t) { return t / 2.0; }, 2.0};
  const std::vector<double> grid{0.0, 0.3, 1.1, 2.0};
  const auto steps = discretize_saqc(p, grid);
  ASSERT_EQ(steps.size(), 3u);
  CMatrix product = CMatrix::identity(3);
  for (const auto& u : steps) product = u * product;
  EXPECT_LT(max_abs_diff(product, exp_hermitian(h, 2.0)), 1e-10);
}

TEST(Discretize, MidpointValues) {
  const SaqcProblem p = lz_problem(4.0);
  const std::vector<double> one{0.0, 4.0};
  const auto s1 = saqc_midpoints(p, one);
  EXPECT_EQ(s1[0], 0.0);
  EXPECT_NEAR(s1[1], 0.5, 1e-15);
  const auto steps = discretize_saqc(p, one);
  EXPECT_LT(max_abs_diff(steps[0], exp_hermitian(lz_hamiltonian(0.5), 4.0)), 1e-12);

  const auto grid = uniform_time_grid(4.0, 4);
  const auto s = saqc_midpoints(p, grid);
  EXPECT_NEAR(s[1], 0.125, 1e-15);
  EXPECT_NEAR(s[4], 0.875, 1e-15);
}

TEST(Discretize, BadGrids) {
  const SaqcProblem p = lz_problem(1.0);
  auto expect_bad = [&](std::vector<double> g) {
    try {
      discretize_saqc(p, g);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BadGrid);
    }
  };
  expect_bad({0.0});
  expect_bad({0.1, 1.0});
  expect_bad({0.0, 0.5, 0.5, 1.0});
  expect_bad({0.0, 0.6, 0.4, 1.0});
  expect_bad({0.0, 0.9});
  EXPECT_THROW(uniform_time_grid(1.0, 0), Error);
}

TEST(Discretize, NonHermitianHamiltonian) {
  const SaqcProblem p{[](double) { return CMatrix{{0.0, 1.0}, {0.0, 0.0}}; }, 1.0, [](double t) { return t; }, 1.0};
  try {
    discretize_saqc(p, uniform_time_grid(1.0, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonHermitian);
  }
}

TEST(Discretize, LandauZenerFidelityImprovesWithRefinement) {
  const SaqcProblem p = lz_problem(10.0);
  const CVector psi0 = CVector{1.0, 1.0}.normalized();
  const CVector ref = evolve(discretize_saqc(p, uniform_time_grid(10.0, 8192)), psi0);
  double previous = 0.0;
  for (int l = 16; l <= 1024; l *= 2) {
    const CVector psi = evolve(discretize_saqc(p, uniform_time_grid(10.0, l)), psi0);
    const double fidelity = std::norm(inner(ref, psi));
    EXPECT_GE(fidelity, previous - 1e-3) << "L = " << l;
    previous = fidelity;
  }
  EXPECT_GT(previous, 1.0 - 1e-6);
}
