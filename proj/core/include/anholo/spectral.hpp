#pragma once

// Eigenangle curves of U_s along s.
//
// A rank-1 kick only acts inside the cyclic subspace generated by |v> under
// U0; every U0 eigenvector orthogonal to |v> is an s-independent eigenvector
// of U_s (a spectator). The tracker therefore splits the space once,
// follows the coupled levels through a small reduced matrix, and reports the
// spectators as flat curves.

#include <iosfwd>
#include <utility>
#include <vector>

#include "anholo/floquet.hpp"
#include "anholo/numerics.hpp"

namespace anholo {

class CoupledSubspace {
 public:
  /// Clusters U0 eigenangles closer than `cluster_tol`; levels whose cluster
  /// carries less than `overlap_tol` of |v> become spectators.
  explicit CoupledSubspace(const FloquetSystem& sys, double cluster_tol = 1e-9, double overlap_tol = 1e-12);

  std::size_t dim() const noexcept { return basis_.rows(); }
  std::size_t coupled_dim() const noexcept { return weights_.size(); }

  /// Orthonormal basis {q_k} of the coupled subspace, one column per U0 level.
  const CMatrix& basis() const noexcept { return basis_; }
  /// U0 q_k = exp(-i phi_k) q_k.
  const std::vector<double>& phases() const noexcept { return phases_; }
  /// |v> = sum_k weights[k] q_k, all weights positive.
  const std::vector<double>& weights() const noexcept { return weights_; }

  const std::vector<double>& spectator_angles() const noexcept { return spectator_angles_; }
  const CMatrix& spectator_vectors() const noexcept { return spectator_vectors_; }

  /// U_s restricted to the coupled subspace, in the {q_k} basis.
  CMatrix reduced_operator(double s) const;
  /// Eigendecomposition of reduced_operator(s).
  EigenDecomposition reduced_eigen(double s) const;
  /// Maps coupled-basis coordinates back to the full space.
  CVector lift(const CVector& coords) const;
  /// |<v|xi>| for a coupled-basis coordinate vector.
  double overlap_with_v(const CVector& coords) const;

 private:
  CMatrix basis_;
  std::vector<double> phases_;
  std::vector<double> weights_;
  std::vector<double> spectator_angles_;
  CMatrix spectator_vectors_;
};

struct CurveSample {
  double s = 0.0;
  /// Branch-lifted eigenangle, continuous along the curve.
  double theta = 0.0;
  /// Eigenvector of U_s.
  CVector vector;
  /// |<v|xi(s)>|.
  double overlap = 0.0;
};

struct EigenangleCurve {
  std::vector<CurveSample> samples;
  /// Number of 2pi shifts added by lifting, measured at the last sample.
  long branch_offset = 0;
  bool spectator = false;
  /// Coordinates in the coupled basis per sample (empty for spectators).
  std::vector<CVector> coordinates;

  double theta_mod(std::size_t k) const { return wrap_angle(samples[k].theta); }
};

struct CurveSet {
  std::vector<EigenangleCurve> curves;
  CoupledSubspace subspace;

  std::size_t size() const noexcept { return curves.size(); }
  const EigenangleCurve& operator[](std::size_t i) const { return curves[i]; }
  std::vector<double> grid() const;
  /// Curve whose first-sample eigenvector overlaps `state` the most.
  std::size_t curve_for_state(const CVector& state) const;
};

struct TrackOptions {
  double overlap_threshold = 0.7;
  int max_refinement = 12;
  bool store_vectors = true;
};

/// Tracks every eigenangle curve of U_s over [s_from, s_to] on a uniform grid
/// of n_samples points, bisecting locally wherever consecutive eigenvector
/// overlaps fall below the threshold. Curves are ordered by their eigenangle
/// at s_from.
CurveSet track_curves(const FloquetSystem& sys, double s_from, double s_to, int n_samples,
                      const TrackOptions& options = {});

/// theta(2pi) - theta(0) for a curve spanning s in [0, 2pi].
double detect_anholonomy(const EigenangleCurve& curve);

struct GapReport {
  double min_gap = 0.0;
  double s_at_min = 0.0;
  std::pair<int, int> curve_index_pair{0, 0};
};

struct GapOptions {
  /// Curves to compare against; empty means every other curve.
  std::vector<int> against;
  bool refine = true;
  double s_tolerance = 1e-9;
};

/// Smallest circular eigenangle distance between the target curve and the
/// others, refined between grid points by golden-section search.
GapReport min_gap(const CurveSet& curves, int target_index, const GapOptions& options = {});

/// Smallest gap between neighbouring coupled eigenangles at s, without
/// tracking. Returns 2pi when fewer than two levels are coupled.
double instantaneous_gap(const CoupledSubspace& subspace, double s);

struct SpectrumSplit {
  std::vector<double> coupled_angles;
  std::vector<double> coupled_overlaps;
  std::vector<double> spectator_angles;
};

/// Separates a unitary eigendecomposition into |v>-coupled and decoupled
/// levels. Within each cluster of eigenangles the |v> component is
/// concentrated onto a single vector first, so exact degeneracies with
/// spectators do not smear the overlap.
SpectrumSplit split_spectrum(const CMatrix& u, const EigenDecomposition& eig, const CVector& v,
                             double cluster_tol = 1e-9, double overlap_tol = 1e-8);

/// CSV columns: s, curve_id, theta_lifted, theta_mod2pi, overlap_with_v.
void write_curves_csv(std::ostream& out, const CurveSet& curves);

}  // namespace anholo
