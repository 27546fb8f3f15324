#include "anholo/clocksim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "anholo/error.hpp"

namespace anholo {

// ---------------------------------------------------------------- gates

Gate gate_x(int q) { return {CMatrix{{0.0, 1.0}, {1.0, 0.0}}, {q}, "X"}; }

Gate gate_h(int q) {
  const double r = 1.0 / std::sqrt(2.0);
  return {CMatrix{{r, r}, {r, -r}}, {q}, "H"};
}

Gate gate_phase(int q, double phi) { return {CMatrix{{1.0, 0.0}, {0.0, std::polar(1.0, phi)}}, {q}, "PHASE"}; }

Gate gate_cnot(int control, int target) {
  return {CMatrix{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}},
          {control, target},
          "CNOT"};
}

void ClockCircuit::validate() const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "circuit needs at least one work qubit");
  if (gates.empty()) throw Error(ErrorCode::InvalidArgument, "circuit needs at least one gate");
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    const std::size_t k = gate.targets.size();
    const std::string where = "gate " + std::to_string(g);
    if (k < 1 || k > 2) throw Error(ErrorCode::InvalidArgument, where + " must act on one or two qubits");
    if (gate.unitary.rows() != (std::size_t{1} << k) || !gate.unitary.is_square()) {
      throw Error(ErrorCode::InvalidArgument, where + " matrix size does not match its targets");
    }
    for (int t : gate.targets) {
      if (t < 0 || t >= n) throw Error(ErrorCode::InvalidArgument, where + " targets a qubit outside the register");
    }
    if (k == 2 && gate.targets[0] == gate.targets[1]) {
      throw Error(ErrorCode::InvalidArgument, where + " targets must be distinct");
    }
    if (!is_unitary(gate.unitary)) throw Error(ErrorCode::NonUnitary, where + " is not unitary");
  }
}

namespace {

struct Layout {
  int n;
  int steps;
  std::size_t clock_dim() const { return std::size_t{1} << steps; }
  std::size_t work_dim() const { return std::size_t{1} << n; }
  std::size_t dim() const { return std::size_t{1} << (n + steps); }
  std::size_t clock_bit(int l) const { return std::size_t{1} << (steps - l); }
  int q(std::size_t clk, int l) const { return static_cast<int>((clk >> (steps - l)) & 1u); }
};

Layout layout_of(const ClockCircuit& c) { return {c.n, c.steps()}; }

// Calls emit(w_out, amp) for the nonzero entries of column w of the gate
// (or of its adjoint) acting on an n-qubit work register.
template <class F>
void gate_column(const Gate& gate, int n, std::size_t w, bool adjoint, F&& emit) {
  const std::size_t k = gate.targets.size();
  std::size_t local_in = 0;
  std::size_t mask = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t bit = std::size_t{1} << (n - 1 - gate.targets[j]);
    mask |= bit;
    if (w & bit) local_in |= std::size_t{1} << (k - 1 - j);
  }
  for (std::size_t local_out = 0; local_out < (std::size_t{1} << k); ++local_out) {
    const Complex amp = adjoint ? std::conj(gate.unitary(local_in, local_out)) : gate.unitary(local_out, local_in);
    if (amp == Complex{}) continue;
    std::size_t w_out = w & ~mask;
    for (std::size_t j = 0; j < k; ++j) {
      if (local_out & (std::size_t{1} << (k - 1 - j))) w_out |= std::size_t{1} << (n - 1 - gate.targets[j]);
    }
    emit(w_out, amp);
  }
}

enum Term : unsigned { kClock = 1, kClockInit = 2, kInput = 4, kHistory = 8 };
constexpr unsigned kHB = kClock | kClockInit | kInput;
constexpr unsigned kHP = kClock | kInput | kHistory;

bool hop_allowed(const Layout& lay, std::size_t clk, int l) {
  return (l == 1 || lay.q(clk, l - 1) == 1) && (l == lay.steps || lay.q(clk, l + 1) == 0);
}

double diagonal_part(const ClockCircuit& c, const Layout& lay, unsigned terms, std::size_t idx) {
  const std::size_t clk = idx & (lay.clock_dim() - 1);
  const std::size_t w = idx >> lay.steps;
  double d = 0.0;
  if (terms & kClock) {
    for (int l = 1; l < lay.steps; ++l) d += (lay.q(clk, l) == 0 && lay.q(clk, l + 1) == 1) ? 1.0 : 0.0;
  }
  if (terms & kClockInit) d += lay.q(clk, 1);
  if ((terms & kInput) && lay.q(clk, 1) == 0) d += std::popcount(w);
  if (terms & kHistory) {
    for (int l = 1; l <= c.steps(); ++l) d += hop_allowed(lay, clk, l) ? 0.5 : 0.0;
  }
  return d;
}

// Calls emit(row, amp) for every entry of column idx of the selected terms.
template <class F>
void operator_column(const ClockCircuit& c, const Layout& lay, unsigned terms, std::size_t idx, F&& emit) {
  const double d = diagonal_part(c, lay, terms, idx);
  if (d != 0.0) emit(idx, Complex(d));
  if (!(terms & kHistory)) return;
  const std::size_t clk = idx & (lay.clock_dim() - 1);
  const std::size_t w = idx >> lay.steps;
  for (int l = 1; l <= c.steps(); ++l) {
    if (!hop_allowed(lay, clk, l)) continue;
    const bool up = lay.q(clk, l) == 0;
    const std::size_t clk_out = up ? (clk | lay.clock_bit(l)) : (clk & ~lay.clock_bit(l));
    gate_column(c.gates[static_cast<std::size_t>(l - 1)], c.n, w, !up, [&](std::size_t w_out, Complex amp) {
      emit((w_out << lay.steps) | clk_out, -0.5 * amp);
    });
  }
}

CMatrix dense_operator(const ClockCircuit& c, const Layout& lay, unsigned terms) {
  CMatrix m(lay.dim(), lay.dim());
  for (std::size_t idx = 0; idx < lay.dim(); ++idx) {
    operator_column(c, lay, terms, idx, [&](std::size_t row, Complex amp) { m(row, idx) += amp; });
  }
  return m;
}

CVector apply_operator(const ClockCircuit& c, const Layout& lay, unsigned terms, const CVector& psi) {
  CVector out(lay.dim());
  for (std::size_t idx = 0; idx < lay.dim(); ++idx) {
    const Complex a = psi[idx];
    if (a == Complex{}) continue;
    operator_column(c, lay, terms, idx, [&](std::size_t row, Complex amp) { out[row] += amp * a; });
  }
  return out;
}

void check_sizes(const ClockCircuit& c, int extra_qubits, int cap) {
  c.validate();
  if (c.steps() > kMaxClockQubits) {
    throw Error(ErrorCode::TooLarge, "at most " + std::to_string(kMaxClockQubits) + " gates are supported");
  }
  if (c.n + c.steps() + extra_qubits > cap) {
    throw Error(ErrorCode::TooLarge, "circuit needs " + std::to_string(c.n + c.steps() + extra_qubits) +
                                         " qubits; the limit here is " + std::to_string(cap));
  }
}

void apply_gate_work(const Gate& gate, int n, std::vector<Complex>& amps) {
  std::vector<Complex> out(amps.size());
  for (std::size_t w = 0; w < amps.size(); ++w) {
    if (amps[w] == Complex{}) continue;
    gate_column(gate, n, w, false, [&](std::size_t w_out, Complex amp) { out[w_out] += amp * amps[w]; });
  }
  amps.swap(out);
}

}  // namespace

// ---------------------------------------------------------------- clock states

std::size_t clock_index(int steps, int l) {
  if (l < 0 || l > steps) throw Error(ErrorCode::IndexOutOfRange, "clock value outside [0, L]");
  return ((std::size_t{1} << l) - 1) << (steps - l);
}

std::vector<CVector> clock_states(int steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "L must be at least 1");
  if (steps > kMaxClockQubits) throw Error(ErrorCode::TooLarge, "clock register too large");
  std::vector<CVector> out;
  for (int l = 0; l <= steps; ++l) out.push_back(CVector::basis(std::size_t{1} << steps, clock_index(steps, l)));
  return out;
}

// ---------------------------------------------------------------- Hamiltonians

std::vector<CVector> history_snapshots(const ClockCircuit& c) {
  c.validate();
  const Layout lay = layout_of(c);
  std::vector<Complex> alpha(lay.work_dim());
  alpha[0] = 1.0;
  std::vector<CVector> out;
  for (int l = 0; l <= c.steps(); ++l) {
    if (l > 0) apply_gate_work(c.gates[static_cast<std::size_t>(l - 1)], c.n, alpha);
    CVector g(lay.dim());
    const std::size_t clk = clock_index(c.steps(), l);
    for (std::size_t w = 0; w < lay.work_dim(); ++w) g[(w << c.steps()) | clk] = alpha[w];
    out.push_back(std::move(g));
  }
  return out;
}

CMatrix restricted_h_h(const ClockCircuit& c) {
  check_sizes(c, 0, kMaxMapQubits);
  const Layout lay = layout_of(c);
  const auto gamma = history_snapshots(c);
  const std::size_t m = gamma.size();
  CMatrix out(m, m);
  for (std::size_t l = 0; l < m; ++l) {
    const CVector hg = apply_operator(c, lay, kHistory, gamma[l]);
    for (std::size_t j = 0; j < m; ++j) out(j, l) = inner(gamma[j], hg);
  }
  return out;
}

ClockHamiltonians build_clock_hamiltonians(const ClockCircuit& c) {
  check_sizes(c, 0, kMaxDenseQubits);
  const Layout lay = layout_of(c);
  ClockHamiltonians h;
  h.h_clock = dense_operator(c, lay, kClock);
  h.h_clockinit = dense_operator(c, lay, kClockInit);
  h.h_input = dense_operator(c, lay, kInput);
  h.h_h = dense_operator(c, lay, kHistory);
  h.h_b = h.h_clockinit + h.h_input + h.h_clock;
  h.h_p = h.h_h + h.h_input + h.h_clock;
  h.restricted_h_h = restricted_h_h(c);
  return h;
}

CVector apply_h_p(const ClockCircuit& c, const CVector& psi) {
  check_sizes(c, 0, kMaxMapQubits);
  const Layout lay = layout_of(c);
  if (psi.dim() != lay.dim()) throw Error(ErrorCode::InvalidArgument, "state dimension does not match the circuit");
  return apply_operator(c, lay, kHP, psi);
}

std::vector<double> clock_h_b_diagonal(const ClockCircuit& c) {
  const Layout lay = layout_of(c);
  std::vector<double> d(lay.dim());
  for (std::size_t idx = 0; idx < lay.dim(); ++idx) d[idx] = diagonal_part(c, lay, kHB, idx);
  return d;
}

// ---------------------------------------------------------------- history state

void apply_f_clock(int n, int steps, std::span<Complex> psi) {
  const Layout lay{n, steps};
  if (psi.size() != lay.dim()) throw Error(ErrorCode::InvalidArgument, "state dimension does not match the circuit");
  const std::size_t m = static_cast<std::size_t>(steps) + 1;
  std::vector<std::size_t> clk(m);
  for (std::size_t l = 0; l < m; ++l) clk[l] = clock_index(steps, static_cast<int>(l));
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<Complex> a(m);
  for (std::size_t w = 0; w < lay.work_dim(); ++w) {
    for (std::size_t j = 0; j < m; ++j) a[j] = psi[(w << steps) | clk[j]];
    for (std::size_t l = 0; l < m; ++l) {
      Complex acc{};
      for (std::size_t j = 0; j < m; ++j) {
        acc += std::polar(norm, -kTwoPi * static_cast<double>((j * l) % m) / static_cast<double>(m)) * a[j];
      }
      psi[(w << steps) | clk[l]] = acc;
    }
  }
}

void apply_u_h(const ClockCircuit& c, std::span<Complex> psi) {
  const Layout lay = layout_of(c);
  if (psi.size() != lay.dim()) throw Error(ErrorCode::InvalidArgument, "state dimension does not match the circuit");
  std::vector<Complex> amps(lay.work_dim());
  for (int l = 1; l <= c.steps(); ++l) {
    for (std::size_t clk = 0; clk < lay.clock_dim(); ++clk) {
      if (lay.q(clk, l) == 0) continue;
      for (std::size_t w = 0; w < lay.work_dim(); ++w) amps[w] = psi[(w << c.steps()) | clk];
      apply_gate_work(c.gates[static_cast<std::size_t>(l - 1)], c.n, amps);
      for (std::size_t w = 0; w < lay.work_dim(); ++w) psi[(w << c.steps()) | clk] = amps[w];
    }
  }
}

CVector history_state(const ClockCircuit& c) {
  check_sizes(c, 0, kMaxMapQubits);
  const Layout lay = layout_of(c);
  CVector psi = CVector::basis(lay.dim(), 0);
  apply_f_clock(c.n, c.steps(), psi.span());
  apply_u_h(c, psi.span());

  CVector direct(lay.dim());
  for (const auto& g : history_snapshots(c)) direct += g;
  direct *= 1.0 / std::sqrt(static_cast<double>(c.steps() + 1));
  if (max_abs_diff(psi, direct) > 1e-10) {
    throw Error(ErrorCode::ConsistencyCheckFailed, "U_h F_clock |gamma(0)> differs from the history state");
  }
  return psi;
}

// ---------------------------------------------------------------- block map

std::vector<ClockMap::Block> ClockMap::hp_blocks(const ClockCircuit& c) {
  check_sizes(c, 1, kMaxMapQubits);
  const Layout lay = layout_of(c);

  // Connected clock configurations under the allowed single-qubit hops.
  std::vector<std::size_t> parent(lay.clock_dim());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t clk = 0; clk < lay.clock_dim(); ++clk) {
    for (int l = 1; l <= c.steps(); ++l) {
      if (lay.q(clk, l) == 0 && hop_allowed(lay, clk, l)) {
        const std::size_t a = find(clk), b = find(clk | lay.clock_bit(l));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<std::size_t>> members(lay.clock_dim());
  for (std::size_t clk = 0; clk < lay.clock_dim(); ++clk) members[find(clk)].push_back(clk);

  constexpr std::size_t kMaxBlock = 1024;
  std::vector<Block> blocks;
  std::vector<std::size_t> local(lay.dim());
  for (const auto& clks : members) {
    if (clks.empty()) continue;
    Block block;
    for (std::size_t clk : clks)
      for (std::size_t w = 0; w < lay.work_dim(); ++w) block.indices.push_back((w << c.steps()) | clk);
    const std::size_t size = block.indices.size();
    if (size > kMaxBlock) throw Error(ErrorCode::TooLarge, "an H_P block exceeds " + std::to_string(kMaxBlock));
    for (std::size_t i = 0; i < size; ++i) local[block.indices[i]] = i;
    CMatrix h(size, size);
    for (std::size_t i = 0; i < size; ++i) {
      operator_column(c, lay, kHP, block.indices[i], [&](std::size_t row, Complex amp) { h(local[row], i) += amp; });
    }
    auto eig = eig_hermitian(h);
    block.energies = std::move(eig.values);
    block.vectors = std::move(eig.vectors);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

ClockMap::ClockMap(const ClockCircuit& c, std::vector<Block> blocks, double e_p, double period, CVector v)
    : dim_(layout_of(c).dim() * 2), v_(std::move(v)), period_(period), blocks_(std::move(blocks)) {
  if (v_.dim() != dim_) throw Error(ErrorCode::InvalidArgument, "kick vector dimension does not match the circuit");
  if (!v_.is_normalized()) throw Error(ErrorCode::UnnormalizedVector, "kick vector must be normalized");
  h_b_diag_ = clock_h_b_diagonal(c);
  phase_b_.resize(h_b_diag_.size());
  for (std::size_t i = 0; i < h_b_diag_.size(); ++i) phase_b_[i] = std::polar(1.0, -h_b_diag_[i] * period_);
  for (auto& block : blocks_) {
    std::vector<double> shifted = block.energies;
    for (double& e : shifted) e += e_p;
    block.propagator = exp_hermitian(EigenDecomposition{shifted, block.vectors}, period_);
  }
}

void ClockMap::apply_unperturbed(std::span<Complex> psi) const {
  for (std::size_t i = 0; i < phase_b_.size(); ++i) psi[i << 1] *= phase_b_[i];
  thread_local std::vector<Complex> in, out;
  for (const auto& block : blocks_) {
    const std::size_t m = block.indices.size();
    in.resize(m);
    out.resize(m);
    for (std::size_t i = 0; i < m; ++i) in[i] = psi[(block.indices[i] << 1) | 1u];
    multiply_into(block.propagator, in, out);
    for (std::size_t i = 0; i < m; ++i) psi[(block.indices[i] << 1) | 1u] = out[i];
  }
}

double clock_w_max(const ClockCircuit& c, const std::vector<ClockMap::Block>& blocks, double e_p) {
  const auto hb = clock_h_b_diagonal(c);
  double w = *std::max_element(hb.begin(), hb.end());
  for (const auto& block : blocks) w = std::max(w, e_p + block.energies.back());
  return w;
}

// ---------------------------------------------------------------- G and composition

void apply_g(const ClockCircuit& c, std::span<Complex> psi) {
  const Layout lay = layout_of(c);
  if (psi.size() != 2 * lay.dim()) throw Error(ErrorCode::InvalidArgument, "state dimension does not match the circuit");
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Complex> upper(lay.dim());
  for (std::size_t i = 0; i < lay.dim(); ++i) {
    const Complex a0 = psi[i << 1], a1 = psi[(i << 1) | 1u];
    psi[i << 1] = r * (a0 + a1);
    upper[i] = r * (a0 - a1);
  }
  apply_f_clock(c.n, c.steps(), upper);
  apply_u_h(c, upper);
  for (std::size_t i = 0; i < lay.dim(); ++i) psi[(i << 1) | 1u] = upper[i];
}

CMatrix g_matrix(const ClockCircuit& c) {
  check_sizes(c, 1, kMaxDenseQubits);
  const std::size_t dim = 2 * layout_of(c).dim();
  CMatrix g(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    CVector e = CVector::basis(dim, col);
    apply_g(c, e.span());
    g.set_column(col, e);
  }
  return g;
}

ClockAaqc compose_circuit_aaqc(const ClockCircuit& c, double e_p, double period) {
  check_sizes(c, 1, kMaxMapQubits);
  if (!(e_p > 0.0 && e_p < 1.0)) {
    throw Error(ErrorCode::GapConditionViolated, "E_P must lie in (0, 1), below the first excited energy of H_B");
  }
  const Layout lay = layout_of(c);
  auto blocks = ClockMap::hp_blocks(c);

  ClockAaqc out;
  out.circuit = c;
  out.e_p = e_p;
  out.w_max = clock_w_max(c, blocks, e_p);
  out.period = period > 0.0 ? period : 0.9 * kTwoPi / out.w_max;
  if (!(out.period * out.w_max < kTwoPi)) {
    throw Error(ErrorCode::PeriodTooLong, "T must be smaller than 2pi / W = " + std::to_string(kTwoPi / out.w_max));
  }

  const std::size_t dim = 2 * lay.dim();
  out.minus = CVector::basis(dim, 0);
  const CVector eta = history_state(c);
  out.plus = CVector(dim);
  for (std::size_t i = 0; i < lay.dim(); ++i) out.plus[(i << 1) | 1u] = eta[i];
  CVector v = (1.0 / std::sqrt(2.0)) * (out.minus + out.plus);

  CVector gv = out.minus;
  apply_g(c, gv.span());
  if (max_abs_diff(gv, v) > 1e-10) throw Error(ErrorCode::ConsistencyCheckFailed, "G|-> differs from |v>");

  auto map = std::make_shared<ClockMap>(c, std::move(blocks), e_p, out.period, v);

  if (c.n + c.steps() + 1 <= kMaxDenseQubits) {
    // Assemble H0, its eigendecomposition and exp(-i H0 T) from the blocks.
    const auto& hb = map->h_b_diagonal();
    CMatrix h0(dim, dim), u0(dim, dim);
    std::vector<std::pair<double, CVector>> pairs;
    for (std::size_t i = 0; i < lay.dim(); ++i) {
      h0(i << 1, i << 1) = hb[i];
      u0(i << 1, i << 1) = std::polar(1.0, -hb[i] * out.period);
      pairs.emplace_back(hb[i], CVector::basis(dim, i << 1));
    }
    for (const auto& block : map->blocks()) {
      const std::size_t m = block.indices.size();
      for (std::size_t a = 0; a < m; ++a) {
        const std::size_t ra = (block.indices[a] << 1) | 1u;
        for (std::size_t b = 0; b < m; ++b) {
          const std::size_t rb = (block.indices[b] << 1) | 1u;
          Complex acc{};
          for (std::size_t k = 0; k < m; ++k) {
            acc += block.vectors(a, k) * block.energies[k] * std::conj(block.vectors(b, k));
          }
          h0(ra, rb) = acc + (a == b ? e_p : 0.0);
          u0(ra, rb) = block.propagator(a, b);
        }
      }
      for (std::size_t k = 0; k < m; ++k) {
        CVector vec(dim);
        for (std::size_t a = 0; a < m; ++a) vec[(block.indices[a] << 1) | 1u] = block.vectors(a, k);
        pairs.emplace_back(block.energies[k] + e_p, std::move(vec));
      }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    EigenDecomposition eig;
    eig.vectors = CMatrix(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
      eig.values.push_back(pairs[k].first);
      eig.vectors.set_column(k, pairs[k].second);
    }
    out.dense.emplace(std::move(h0), std::move(eig), std::move(u0), v, out.period);
  }
  out.map = std::move(map);
  return out;
}

// ---------------------------------------------------------------- output

CircuitOutput extract_output(const CVector& final_state, const ClockCircuit& c) {
  const Layout lay = layout_of(c);
  if (final_state.dim() != 2 * lay.dim()) {
    throw Error(ErrorCode::InvalidArgument, "state dimension does not match the circuit");
  }
  const std::size_t clk = clock_index(c.steps(), c.steps());
  CircuitOutput out;
  out.state = CVector(lay.work_dim());
  for (std::size_t w = 0; w < lay.work_dim(); ++w) out.state[w] = final_state[(((w << c.steps()) | clk) << 1) | 1u];
  const double norm = out.state.norm();
  out.probability = norm * norm;
  if (out.probability < 1e-14) throw Error(ErrorCode::ZeroProjection, "no weight on the final clock value");
  out.state *= 1.0 / norm;
  return out;
}

CVector simulate_circuit(const ClockCircuit& c) {
  c.validate();
  std::vector<Complex> amps(std::size_t{1} << c.n);
  amps[0] = 1.0;
  for (const auto& gate : c.gates) apply_gate_work(gate, c.n, amps);
  return CVector(std::move(amps));
}

}  // namespace anholo
