#include <gtest/gtest.h>

#include "anholo/clocksim.hpp"
#include "anholo/error.hpp"
#include "anholo/passage.hpp"
#include "anholo/spectral.hpp"
#include "support.hpp"

using namespace anholo;

namespace {

ClockCircuit x_circuit() { return {1, {gate_x(0)}}; }
ClockCircuit bell_circuit() { return {2, {gate_h(0), gate_cnot(0, 1)}}; }
ClockCircuit identity_circuit(int n, int steps) {
  ClockCircuit c{n, {}};
  for (int l = 0; l < steps; ++l) c.gates.push_back({CMatrix::identity(2), {l % n}, "I"});
  return c;
}
ClockCircuit mixed_circuit() {
  return {3, {gate_h(0), gate_cnot(0, 2), gate_phase(1, 0.7), gate_x(1), gate_cnot(2, 1)}};
}

double leak(const CMatrix& h, const std::vector<CVector>& basis) {
  double worst = 0.0;
  for (const auto& b : basis) {
    CVector hb = h * b;
    for (const auto& c : basis) hb -= inner(c, hb) * c;
    worst = std::max(worst, hb.norm());
  }
  return worst;
}

}  // namespace

TEST(Clock, ClockStates) {
  const auto states = clock_states(2);
  ASSERT_EQ(states.size(), 3u);
  EXPECT_EQ(states[0][0b00], Complex(1.0));
  EXPECT_EQ(states[1][0b10], Complex(1.0));
  EXPECT_EQ(states[2][0b11], Complex(1.0));
  const auto five = clock_states(5);
  for (std::size_t i = 0; i < five.size(); ++i)
    for (std::size_t j = 0; j < five.size(); ++j) EXPECT_EQ(inner(five[i], five[j]), Complex(i == j ? 1.0 : 0.0));
  EXPECT_THROW(clock_states(13), Error);
  EXPECT_THROW(clock_states(0), Error);
}

TEST(Clock, ValidClockStatesAreAnnihilatedByClockTerm) {
  const ClockCircuit c = identity_circuit(1, 4);
  const auto h = build_clock_hamiltonians(c);
  for (int l = 0; l <= 4; ++l) {
    CVector g(h.h_clock.rows());
    g[clock_index(4, l)] = 1.0;  // work register |0>
    EXPECT_LT((h.h_clock * g).norm(), 1e-15);
  }
}

TEST(Clock, RestrictedHistoryHamiltonian) {
  for (int steps = 2; steps <= 6; ++steps) {
    ClockCircuit c = identity_circuit(2, steps);
    c.gates[0] = gate_h(0);
    c.gates[1] = gate_cnot(0, 1);
    const CMatrix r = restricted_h_h(c);
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= steps; ++j) {
        double expected = 0.0;
        if (i == j) expected = (i == 0 || i == steps) ? 0.5 : 1.0;
        if (std::abs(i - j) == 1) expected = -0.5;
        EXPECT_NEAR(std::abs(r(i, j) - Complex(expected)), 0.0, 1e-12);
      }
    }
    const auto e = eig_hermitian(r);
    for (int k = 0; k <= steps; ++k) EXPECT_NEAR(e.values[k], 1.0 - std::cos(k * kPi / (steps + 1)), 1e-10);
  }
}

TEST(Clock, HamiltonianStructure) {
  for (const auto& c : {x_circuit(), bell_circuit(), mixed_circuit()}) {
    const auto h = build_clock_hamiltonians(c);
    for (const CMatrix* m : {&h.h_clock, &h.h_clockinit, &h.h_input, &h.h_b, &h.h_h, &h.h_p}) {
      EXPECT_TRUE(is_hermitian(*m, 1e-14));
    }
    // H_B: unique ground state |0...0> at energy 0, gap 1.
    const auto eb = eig_hermitian(h.h_b);
    EXPECT_NEAR(eb.values[0], 0.0, 1e-14);
    EXPECT_NEAR(eb.values[1], 1.0, 1e-14);
    EXPECT_NEAR(std::abs(eb.vectors(0, 0)), 1.0, 1e-14);

    const auto gamma = history_snapshots(c);
    EXPECT_LT(leak(h.h_h, gamma), 1e-10);
    EXPECT_LT(leak(h.h_p, gamma), 1e-10);

    const CVector eta = history_state(c);
    EXPECT_LT((h.h_p * eta).norm(), 1e-10);
    EXPECT_LT(max_abs_diff(apply_h_p(c, eta), h.h_p * eta), 1e-14);
    const auto ep = eig_hermitian(h.h_p);
    EXPECT_NEAR(ep.values[0], 0.0, 1e-10);
    EXPECT_GT(ep.values[1], 1e-3);
  }
}

TEST(Clock, HistoryStateExamples) {
  const CVector eta = history_state(x_circuit());
  const double r = 1.0 / std::sqrt(2.0);
  // Index (w << 1) | clk: |0>|0> -> 0, |1>|1> -> 3.
  EXPECT_NEAR(std::abs(eta[0] - Complex(r)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eta[3] - Complex(r)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eta[1]) + std::abs(eta[2]), 0.0, 1e-14);

  const int steps = 3;
  const CVector id = history_state(identity_circuit(2, steps));
  for (int l = 0; l <= steps; ++l) EXPECT_NEAR(id[clock_index(steps, l)].real(), 0.5, 1e-14);
}

TEST(Clock, UhActsAsCircuitOnClockStates) {
  const ClockCircuit c = mixed_circuit();
  const int steps = c.steps();
  const std::size_t dim = std::size_t{1} << (c.n + steps);
  std::vector<Complex> alpha(std::size_t{1} << c.n);
  alpha[0] = 1.0;
  for (int l = 0; l <= steps; ++l) {
    CVector psi = CVector::basis(dim, clock_index(steps, l));
    apply_u_h(c, psi.span());
    ClockCircuit prefix{c.n, {c.gates.begin(), c.gates.begin() + l}};
    const CVector expected = l == 0 ? CVector::basis(alpha.size(), 0) : simulate_circuit(prefix);
    for (std::size_t w = 0; w < expected.dim(); ++w) {
      EXPECT_NEAR(std::abs(psi[(w << steps) | clock_index(steps, l)] - expected[w]), 0.0, 1e-14);
    }
  }
}

TEST(Clock, FClockIsUnitary) {
  const int n = 1, steps = 3;
  const std::size_t dim = std::size_t{1} << (n + steps);
  CMatrix f(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    CVector e = CVector::basis(dim, col);
    apply_f_clock(n, steps, e.span());
    f.set_column(col, e);
  }
  EXPECT_TRUE(is_unitary(f, 1e-12));
  // Identity outside the valid clock span.
  EXPECT_EQ(f(0b0001, 0b0001), Complex(1.0));
}

TEST(Clock, ComposeBuildsGAndSpectrum) {
  const auto a = compose_circuit_aaqc(x_circuit(), 0.5, 1.0);
  ASSERT_TRUE(a.dense.has_value());
  EXPECT_LT(a.period * a.w_max, kTwoPi);
  const CMatrix g = g_matrix(x_circuit());
  EXPECT_TRUE(is_unitary(g, 1e-12));
  EXPECT_LT(max_abs_diff(g * a.minus, a.dense->kick_vector()), 1e-10);

  // Block assembly matches a dense build of H0.
  const auto h = build_clock_hamiltonians(x_circuit());
  const CMatrix z{{1.0, 0.0}, {0.0, 0.0}};
  const CMatrix i1{{0.0, 0.0}, {0.0, 1.0}};
  CMatrix hp = h.h_p;
  for (std::size_t k = 0; k < hp.rows(); ++k) hp(k, k) += 0.5;
  const CMatrix h0 = kron(h.h_b, z) + kron(hp, i1);
  EXPECT_LT(max_abs_diff(h0, a.dense->h0()), 1e-14);
  EXPECT_LT(max_abs_diff(exp_hermitian(h0, a.period), a.dense->unperturbed()), 1e-10);

  // The block map and the dense operator agree.
  CVector psi = a.dense->kick_vector();
  CVector dense = psi;
  a.map->apply(1.3, psi.span());
  a.dense->apply(1.3, dense.span());
  EXPECT_LT(max_abs_diff(psi, dense), 1e-12);
}

TEST(Clock, ComposeErrors) {
  try {
    compose_circuit_aaqc(x_circuit(), 1.2, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GapConditionViolated);
  }
  try {
    compose_circuit_aaqc(x_circuit(), 0.5, 10.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PeriodTooLong);
  }
  try {
    build_clock_hamiltonians(identity_circuit(4, 8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
  ClockCircuit bad{1, {{CMatrix{{1.0, 1.0}, {0.0, 1.0}}, {0}, "bad"}}};
  EXPECT_THROW(bad.validate(), Error);
  ClockCircuit range{1, {gate_x(3)}};
  EXPECT_THROW(range.validate(), Error);
}

TEST(Clock, SingleGatePassageAndOutput) {
  const auto a = compose_circuit_aaqc(x_circuit(), 0.5, 1.0);
  const auto r = run_passage(*a.map, linear_schedule(kTwoPi, 4096), a.minus, a.plus);
  EXPECT_LT(r.error, 0.05);
  const auto out = extract_output(r.final_state, x_circuit());
  EXPECT_NEAR(std::abs(out.state[1]), 1.0, 1e-3);
  EXPECT_NEAR(out.probability, 0.5, 2.0 * r.error);

  const auto exact = extract_output(a.plus, x_circuit());
  EXPECT_NEAR(exact.probability, 0.5, 1e-14);
  try {
    extract_output(a.minus, x_circuit());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroProjection);
  }
}

TEST(Clock, IdentityCircuitOutput) {
  const ClockCircuit c = identity_circuit(2, 3);
  const auto a = compose_circuit_aaqc(c, 0.5);
  const auto out = extract_output(a.plus, c);
  EXPECT_NEAR(out.probability, 0.25, 1e-14);
  EXPECT_NEAR(std::abs(out.state[0]), 1.0, 1e-14);
}

TEST(Clock, SpectatorAndMinimumGap) {
  const auto a = compose_circuit_aaqc(x_circuit(), 0.5, 1.0);
  const auto set = track_curves(*a.dense, 0.0, kTwoPi, 200);
  const double delta = 1.0 - std::cos(kPi / 2.0);
  const double flat = (0.5 + delta) * a.period;
  int spectator = -1;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i].spectator && std::abs(set[i].samples.front().theta - flat) < 1e-9) spectator = static_cast<int>(i);
  }
  ASSERT_GE(spectator, 0);
  for (const auto& sample : set[static_cast<std::size_t>(spectator)].samples) EXPECT_EQ(sample.theta, set[static_cast<std::size_t>(spectator)].samples.front().theta);

  const auto e0 = set.curve_for_state(a.minus);
  EXPECT_NEAR(detect_anholonomy(set[e0]), 0.5 * a.period, 1e-8);
  GapOptions opt;
  opt.against = {spectator};
  const auto report = min_gap(set, static_cast<int>(e0), opt);
  EXPECT_NEAR(report.min_gap, delta * a.period, 1e-8);
  EXPECT_NEAR(report.s_at_min, kTwoPi, 1e-6);
}

TEST(Clock, BlockMapHandlesLargerCircuits) {
  // 2 + 9 + 1 = 12 qubits: beyond the dense limit, still fine for passages.
  ClockCircuit c = identity_circuit(2, 9);
  c.gates[0] = gate_h(0);
  c.gates[4] = gate_cnot(0, 1);
  const auto a = compose_circuit_aaqc(c, 0.5);
  EXPECT_FALSE(a.dense.has_value());
  CVector psi = a.minus;
  a.map->apply(0.4, psi.span());
  EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
  // Unperturbed step leaves |+> invariant up to the phase exp(-i E_P T).
  CVector plus = a.plus;
  a.map->apply_unperturbed(plus.span());
  EXPECT_NEAR(std::abs(inner(a.plus, plus) - std::polar(1.0, -0.5 * a.period)), 0.0, 1e-10);
}

TEST(Clock, GapScalesAsInverseSquare) {
  double last = 0.0;
  for (int steps = 2; steps <= 10; ++steps) {
    ClockCircuit c = identity_circuit(1, steps);
    const auto e = eig_hermitian(restricted_h_h(c));
    last = e.values[1] * (steps + 1) * (steps + 1);
    EXPECT_LE(std::abs(e.values.back() - 2.0), 4.0 / steps);
  }
  EXPECT_NEAR(last / (kPi * kPi / 2.0), 1.0, 0.05);
}

TEST(Clock, FullSpaceFirstExcitedLevel) {
  // The restricted gap must show up in the full H_P spectrum; the full-space
  // multiplicity of the first excited level is only recorded.
  for (int steps = 2; steps <= 6; ++steps) {
    ClockCircuit c = identity_circuit(2, steps);
    c.gates[0] = gate_h(0);
    const double delta = 1.0 - std::cos(kPi / (steps + 1));
    const auto full = eig_hermitian(build_clock_hamiltonians(c).h_p).values;
    EXPECT_NEAR(full[0], 0.0, 1e-10);
    std::size_t k = 1;
    while (k < full.size() && full[k] < 1e-9) ++k;
    ASSERT_LT(k, full.size());
    const double first = full[k];
    int multiplicity = 0;
    for (double e : full) multiplicity += std::abs(e - first) < 1e-8;
    bool has_delta = false;
    for (double e : full) has_delta |= std::abs(e - delta) < 1e-9;
    EXPECT_TRUE(has_delta) << "L = " << steps;
    EXPECT_LE(first, delta + 1e-9);
    RecordProperty("L" + std::to_string(steps) + "_first_excited", std::to_string(first));
    RecordProperty("L" + std::to_string(steps) + "_multiplicity", multiplicity);
  }
}
