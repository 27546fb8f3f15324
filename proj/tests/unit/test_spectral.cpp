#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "anholo/error.hpp"
#include "anholo/spectral.hpp"
#include "support.hpp"

using namespace anholo;
using anholo::testing::random_hermitian;
using anholo::testing::random_state;

namespace {

FloquetSystem diagonal_system(std::vector<double> energies, CVector v, double period = 1.0) {
  return FloquetSystem(CMatrix::diagonal(std::span<const double>(energies)), std::move(v), period);
}

FloquetSystem optimal_block(double e_p = kTwoPi / 3.0) {
  return diagonal_system({0.0, e_p}, CVector{1.0, 1.0}.normalized());
}

}  // namespace

TEST(Spectral, SpectatorCurveIsFlat) {
  const auto set = track_curves(diagonal_system({0.0, 1.0, 2.5}, CVector::basis(3, 0)), 0.0, kTwoPi, 50);
  ASSERT_EQ(set.size(), 3u);
  const std::size_t e1 = set.curve_for_state(CVector::basis(3, 1));
  EXPECT_TRUE(set[e1].spectator);
  for (const auto& sample : set[e1].samples) EXPECT_EQ(sample.theta, 1.0);
  EXPECT_EQ(detect_anholonomy(set[e1]), 0.0);

  // The kicked level itself winds once: U_s e0 = exp(-i s) e0.
  const std::size_t e0 = set.curve_for_state(CVector::basis(3, 0));
  EXPECT_NEAR(detect_anholonomy(set[e0]), kTwoPi, 1e-12);
}

TEST(Spectral, TwoLevelAnholonomy) {
  const double e2 = 1.4;
  const auto set = track_curves(diagonal_system({0.0, e2}, CVector{0.6, Complex(0.0, 0.8)}), 0.0, kTwoPi, 64);
  EXPECT_NEAR(set[0].samples.front().theta, 0.0, 1e-12);
  EXPECT_NEAR(detect_anholonomy(set[0]), e2, 1e-10);
  EXPECT_NEAR(detect_anholonomy(set[1]), kTwoPi - e2, 1e-10);
}

TEST(Spectral, OptimalBlockMatchesClosedForm) {
  const double e_p = kTwoPi / 3.0;
  const auto set = track_curves(optimal_block(e_p), 0.0, kTwoPi, 200);
  for (const auto& sample : set[0].samples) {
    const double big = std::acos(std::cos(e_p / 2.0) * std::cos(sample.s / 2.0));
    EXPECT_NEAR(sample.theta, (e_p + sample.s) / 2.0 - big, 1e-8);
  }
  EXPECT_NEAR(detect_anholonomy(set[0]), e_p, 1e-8);
}

TEST(Spectral, BadSpan) {
  const auto set = track_curves(optimal_block(), 0.0, kPi, 10);
  try {
    detect_anholonomy(set[0]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadSpan);
  }
  EXPECT_THROW(track_curves(optimal_block(), 0.0, kPi, 1), Error);
}

TEST(Spectral, FrozenGridGap) {
  const auto set = track_curves(diagonal_system({0.0, kPi}, CVector{1.0, 1.0}.normalized()), 0.0, 0.0, 2);
  const auto report = min_gap(set, 0);
  EXPECT_NEAR(report.min_gap, kPi, 1e-12);
}

TEST(Spectral, OptimalBlockMinimumGap) {
  const auto set = track_curves(optimal_block(), 0.0, kTwoPi, 100);
  const auto report = min_gap(set, 0);
  EXPECT_NEAR(report.min_gap, kTwoPi / 3.0, 1e-9);
  EXPECT_TRUE(report.s_at_min < 1e-6 || report.s_at_min > kTwoPi - 1e-6);
  EXPECT_EQ(report.curve_index_pair.first, 0);
  EXPECT_EQ(report.curve_index_pair.second, 1);
}

TEST(Spectral, GapIndexValidation) {
  const auto set = track_curves(optimal_block(), 0.0, 1.0, 4);
  EXPECT_THROW(min_gap(set, 5), Error);
  GapOptions opt;
  opt.against = {0};
  EXPECT_THROW(min_gap(set, 0, opt), Error);
}

TEST(Spectral, RefinedGapAtAvoidedCrossing) {
  // Weakly coupled third level produces a narrow avoided crossing; the
  // refined minimum must not exceed the best grid value.
  const CVector v = CVector{0.8, 0.05, 0.6}.normalized();
  const auto sys = diagonal_system({0.0, 2.0, 4.0}, v);
  const auto set = track_curves(sys, 0.0, kTwoPi, 60);
  GapOptions coarse;
  coarse.refine = false;
  const auto raw = min_gap(set, 0, coarse);
  const auto fine = min_gap(set, 0);
  EXPECT_LE(fine.min_gap, raw.min_gap + 1e-15);
  // Brute-force scan of the instantaneous spectrum near the reported point.
  double brute = 10.0;
  for (int k = -2000; k <= 2000; ++k) {
    const double s = fine.s_at_min + 1e-5 * k;
    const auto e = eig_unitary(sys.at(s));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) brute = std::min(brute, circular_distance(e.values[i], e.values[j]));
  }
  EXPECT_NEAR(fine.min_gap, brute, 1e-6);
}

TEST(Spectral, CurvesReproduceSpectrumMonotoneAndPeriodic) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const FloquetSystem sys(random_hermitian(rng, n), random_state(rng, n), 0.9);
    const auto set = track_curves(sys, 0.0, kTwoPi, 80);
    const auto grid = set.grid();
    double total_shift = 0.0;
    for (const auto& curve : set.curves) {
      total_shift += detect_anholonomy(curve);
      for (std::size_t k = 1; k < curve.samples.size(); ++k) {
        EXPECT_GE(curve.samples[k].theta, curve.samples[k - 1].theta - 1e-12);
        EXPECT_GE(std::abs(inner(curve.samples[k - 1].vector, curve.samples[k].vector)), 0.7);
      }
    }
    const double windings = total_shift / kTwoPi;
    EXPECT_NEAR(windings, std::round(windings), 1e-8);
    for (std::size_t k = 0; k < grid.size(); k += 7) {
      const auto e = eig_unitary(sys.at(grid[k]));
      std::vector<double> tracked;
      for (const auto& curve : set.curves) tracked.push_back(curve.theta_mod(k));
      std::sort(tracked.begin(), tracked.end());
      for (std::size_t i = 0; i < n; ++i) EXPECT_LT(circular_distance(tracked[i], e.values[i]), 1e-8);
    }
  }
}

TEST(Spectral, EigenangleSlopeEqualsOverlap) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> us(0.1, kTwoPi - 0.1);
  for (int trial = 0; trial < 20; ++trial) {
    const FloquetSystem sys(random_hermitian(rng, 4), random_state(rng, 4), 0.8);
    const double s = us(rng);
    const double h = 1e-5;
    const auto set = track_curves(sys, s - h, s + h, 3);
    for (const auto& curve : set.curves) {
      const double slope = (curve.samples[2].theta - curve.samples[0].theta) / (2.0 * h);
      const double overlap = std::norm(inner(sys.kick_vector(), curve.samples[1].vector));
      EXPECT_NEAR(slope, overlap, 1e-5 * std::max(1.0, overlap));
    }
  }
}

TEST(Spectral, SubspaceSplitsDegenerateLevels) {
  // Triply degenerate level: only one combination couples to v.
  const CVector v = CVector{1.0, 1.0, 1.0, 1.0}.normalized();
  const auto sys = diagonal_system({0.0, 1.0, 1.0, 1.0}, v);
  const CoupledSubspace sub(sys);
  EXPECT_EQ(sub.coupled_dim(), 2u);
  EXPECT_EQ(sub.spectator_angles().size(), 2u);
  for (double a : sub.spectator_angles()) EXPECT_NEAR(a, 1.0, 1e-12);
  const CMatrix b = sub.basis();
  CVector recon(4);
  for (std::size_t k = 0; k < sub.coupled_dim(); ++k) recon += Complex(sub.weights()[k]) * b.column(k);
  EXPECT_LT(max_abs_diff(recon, v), 1e-12);
  const auto set = track_curves(sys, 0.0, kTwoPi, 40);
  EXPECT_EQ(set.size(), 4u);
}

TEST(Spectral, InstantaneousGapAndSplit) {
  const auto sys = optimal_block();
  const CoupledSubspace sub(sys);
  EXPECT_NEAR(instantaneous_gap(sub, 0.0), kTwoPi / 3.0, 1e-12);
  EXPECT_NEAR(instantaneous_gap(sub, kPi), kPi, 1e-12);

  const auto single = CoupledSubspace(diagonal_system({0.0, 1.0}, CVector::basis(2, 0)));
  EXPECT_EQ(instantaneous_gap(single, 1.0), kTwoPi);

  // Spectator exactly degenerate with a coupled level.
  const auto deg = diagonal_system({0.0, 1.0, 1.0}, CVector{0.6, 0.8, 0.0});
  const CMatrix u = deg.at(0.7);
  const auto split = split_spectrum(u, eig_unitary(u), deg.kick_vector());
  EXPECT_EQ(split.coupled_angles.size(), 2u);
  ASSERT_EQ(split.spectator_angles.size(), 1u);
  EXPECT_NEAR(split.spectator_angles[0], 1.0, 1e-9);
}

TEST(Spectral, CsvExport) {
  const auto set = track_curves(optimal_block(), 0.0, kTwoPi, 3);
  std::ostringstream out;
  write_curves_csv(out, set);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,curve_id,theta_lifted,theta_mod2pi,overlap_with_v");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}
