#pragma once

// Clock-register construction that turns a gate sequence into an AAQC
// problem whose final state is the history state of the circuit.
//
// Qubit order: work qubits 0..n-1 (qubit 0 most significant), then clock
// qubits 1..L, then the control qubit. A basis index of the work+clock space
// is (w << L) | clk with clock qubit l stored in bit L - l; the control bit
// is appended as the least significant bit.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anholo/floquet.hpp"
#include "anholo/numerics.hpp"

namespace anholo {

struct Gate {
  CMatrix unitary;
  /// Work-qubit indices; targets[0] is the most significant local qubit.
  std::vector<int> targets;
  std::string name;
};

Gate gate_x(int q);
Gate gate_h(int q);
Gate gate_phase(int q, double phi);
Gate gate_cnot(int control, int target);

struct ClockCircuit {
  int n = 1;
  std::vector<Gate> gates;

  int steps() const noexcept { return static_cast<int>(gates.size()); }
  /// Throws InvalidArgument / NonUnitary on malformed gates.
  void validate() const;
};

inline constexpr int kMaxClockQubits = 12;
/// Dense operators on work + clock are built up to this many qubits.
inline constexpr int kMaxDenseQubits = 10;
/// The block-structured passage map handles up to this many qubits, control included.
inline constexpr int kMaxMapQubits = 15;

/// Index of |c(l)> = |1^l 0^(L-l)> in the clock register.
std::size_t clock_index(int steps, int l);
/// {|c(0)>, ..., |c(L)>} in dimension 2^L.
std::vector<CVector> clock_states(int steps);

struct ClockHamiltonians {
  CMatrix h_clock;
  CMatrix h_clockinit;
  CMatrix h_input;
  CMatrix h_b;
  CMatrix h_h;
  CMatrix h_p;
  /// <gamma(j)|H_h|gamma(l)>, j, l = 0..L.
  CMatrix restricted_h_h;
};

ClockHamiltonians build_clock_hamiltonians(const ClockCircuit& circuit);

/// |gamma(l)> = (U_l ... U_1 |0^n>) (x) |c(l)>, l = 0..L, on work + clock.
std::vector<CVector> history_snapshots(const ClockCircuit& circuit);

/// (L+1)x(L+1) restriction of H_h to span{|gamma(l)>}, computed matrix-free.
CMatrix restricted_h_h(const ClockCircuit& circuit);

/// psi <- F_clock psi on work + clock.
void apply_f_clock(int n, int steps, std::span<Complex> psi);
/// psi <- U_h psi on work + clock.
void apply_u_h(const ClockCircuit& circuit, std::span<Complex> psi);
/// psi <- H_P psi on work + clock, matrix-free.
CVector apply_h_p(const ClockCircuit& circuit, const CVector& psi);

/// U_h F_clock |gamma(0)>, checked against the directly summed history state.
CVector history_state(const ClockCircuit& circuit);

/// One period exp(-i H0 T) of the composed clock problem, applied block by
/// block: H_B is diagonal and H_P splits into blocks indexed by connected
/// sets of clock configurations.
class ClockMap final : public KickedMap {
 public:
  struct Block {
    std::vector<std::size_t> indices;  // work+clock indices
    std::vector<double> energies;      // eigenvalues of H_P on the block
    CMatrix vectors;
    CMatrix propagator;                // exp(-i (H_P + E_P) T), set by ClockMap
  };

  /// Eigendecomposed H_P blocks for the circuit; TooLarge when a block
  /// exceeds 1024 states.
  static std::vector<Block> hp_blocks(const ClockCircuit& circuit);

  ClockMap(const ClockCircuit& circuit, std::vector<Block> blocks, double e_p, double period, CVector v);

  std::size_t dim() const override { return dim_; }
  const CVector& kick_vector() const override { return v_; }
  double period() const override { return period_; }
  void apply_unperturbed(std::span<Complex> psi) const override;

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const std::vector<double>& h_b_diagonal() const noexcept { return h_b_diag_; }

 private:
  std::size_t dim_;
  CVector v_;
  double period_;
  std::vector<Complex> phase_b_;
  std::vector<double> h_b_diag_;
  std::vector<Block> blocks_;
};

/// Largest eigenvalue W of H0 = H_B (x) Z + (H_P + E_P) (x) I.
double clock_w_max(const ClockCircuit& circuit, const std::vector<ClockMap::Block>& blocks, double e_p);

/// Diagonal of H_B on work + clock.
std::vector<double> clock_h_b_diagonal(const ClockCircuit& circuit);

struct ClockAaqc {
  ClockCircuit circuit;
  double e_p = 0.5;
  double period = 0.0;
  double w_max = 0.0;
  CVector minus;
  CVector plus;
  std::shared_ptr<const ClockMap> map;
  /// Dense system with H0 eigendata assembled from blocks; present when the
  /// total qubit count is at most kMaxDenseQubits.
  std::optional<FloquetSystem> dense;
};

/// Builds the clock AAQC problem. A non-positive period selects 0.9 * 2pi / W.
/// Checks G|-> = |v> before returning.
ClockAaqc compose_circuit_aaqc(const ClockCircuit& circuit, double e_p = 0.5, double period = 0.0);

/// psi <- G psi with G = (|0><0|_C + U_h F_clock |1><1|_C) H_C.
void apply_g(const ClockCircuit& circuit, std::span<Complex> psi);
/// G as a dense matrix; limited to kMaxDenseQubits.
CMatrix g_matrix(const ClockCircuit& circuit);

struct CircuitOutput {
  CVector state;
  double probability = 0.0;
};

/// Projects onto clock = |c(L)> and control = |1>, returning the normalized
/// work register and the projection probability.
CircuitOutput extract_output(const CVector& final_state, const ClockCircuit& circuit);

/// U_L ... U_1 |0^n> by direct state-vector simulation.
CVector simulate_circuit(const ClockCircuit& circuit);

}  // namespace anholo
