#include "anholo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "anholo/error.hpp"

namespace anholo {

namespace {

// Groups angle indices into clusters on the circle.
std::vector<std::vector<std::size_t>> cluster_angles(const std::vector<double>& angles, double tol) {
  std::vector<std::size_t> order(angles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return angles[a] < angles[b]; });

  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || angles[order[k]] - angles[order[k - 1]] >= tol) clusters.emplace_back();
    clusters.back().push_back(order[k]);
  }
  if (clusters.size() > 1) {
    const double wrap_gap = angles[order.front()] + kTwoPi - angles[order.back()];
    if (wrap_gap < tol) {
      auto& last = clusters.back();
      clusters.front().insert(clusters.front().begin(), last.begin(), last.end());
      clusters.pop_back();
    }
  }
  return clusters;
}

// Orthonormal complement of the unit vector q inside C^c, built from the
// standard basis by Gram-Schmidt.
std::vector<CVector> complement_basis(const CVector& q) {
  const std::size_t c = q.dim();
  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(q[a]) < std::abs(q[b]); });

  std::vector<CVector> accepted{q};
  std::vector<CVector> out;
  for (std::size_t idx : order) {
    if (out.size() + 1 == c) break;
    CVector r = CVector::basis(c, idx);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& a : accepted) r -= inner(a, r) * a;
    const double n = r.norm();
    if (n < 1e-8) continue;
    r *= 1.0 / n;
    accepted.push_back(r);
    out.push_back(r);
  }
  return out;
}

CVector combine(const CMatrix& vectors, const std::vector<std::size_t>& members, const CVector& coeffs) {
  CVector out(vectors.rows());
  for (std::size_t j = 0; j < members.size(); ++j) {
    const Complex a = coeffs[j];
    if (a == Complex{}) continue;
    for (std::size_t r = 0; r < vectors.rows(); ++r) out[r] += a * vectors(r, members[j]);
  }
  return out;
}

// Rayleigh angle of a cluster combination: members share U0 eigenvectors.
double cluster_angle(const std::vector<double>& angles, const std::vector<std::size_t>& members, const CVector& coeffs) {
  Complex acc{};
  for (std::size_t j = 0; j < members.size(); ++j) acc += std::norm(coeffs[j]) * std::polar(1.0, -angles[members[j]]);
  return wrap_angle(-std::arg(acc));
}

}  // namespace

// ---------------------------------------------------------------- subspace

CoupledSubspace::CoupledSubspace(const FloquetSystem& sys, double cluster_tol, double overlap_tol) {
  const auto& eig = sys.h0_eigen();
  const CVector& v = sys.kick_vector();
  const std::size_t n = sys.dim();
  std::vector<double> angles(n);
  for (std::size_t j = 0; j < n; ++j) angles[j] = wrap_angle(eig.values[j] * sys.period());

  struct Level {
    double angle;
    CVector vector;
    double weight;
  };
  std::vector<Level> coupled;
  std::vector<Level> spectators;

  for (const auto& members : cluster_angles(angles, cluster_tol)) {
    CVector c(members.size());
    for (std::size_t j = 0; j < members.size(); ++j) {
      Complex acc{};
      for (std::size_t r = 0; r < n; ++r) acc += std::conj(eig.vectors(r, members[j])) * v[r];
      c[j] = acc;
    }
    const double w = c.norm();
    if (w > overlap_tol) {
      const CVector q = (1.0 / w) * c;
      coupled.push_back({cluster_angle(angles, members, q), combine(eig.vectors, members, q), w});
      for (const auto& r : complement_basis(q)) {
        spectators.push_back({cluster_angle(angles, members, r), combine(eig.vectors, members, r), 0.0});
      }
    } else {
      for (std::size_t j = 0; j < members.size(); ++j) {
        spectators.push_back({angles[members[j]], eig.vectors.column(members[j]), 0.0});
      }
    }
  }

  std::stable_sort(coupled.begin(), coupled.end(), [](const Level& a, const Level& b) { return a.angle < b.angle; });
  std::stable_sort(spectators.begin(), spectators.end(), [](const Level& a, const Level& b) { return a.angle < b.angle; });

  basis_ = CMatrix(n, coupled.size());
  for (std::size_t k = 0; k < coupled.size(); ++k) {
    basis_.set_column(k, coupled[k].vector);
    phases_.push_back(coupled[k].angle);
    weights_.push_back(coupled[k].weight);
  }
  spectator_vectors_ = CMatrix(n, spectators.size());
  for (std::size_t k = 0; k < spectators.size(); ++k) {
    spectator_vectors_.set_column(k, spectators[k].vector);
    spectator_angles_.push_back(spectators[k].angle);
  }
}

CMatrix CoupledSubspace::reduced_operator(double s) const {
  const std::size_t m = coupled_dim();
  const Complex f = std::polar(1.0, -s) - 1.0;
  CMatrix out(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    const Complex d = std::polar(1.0, -phases_[r]);
    for (std::size_t c = 0; c < m; ++c) {
      out(r, c) = d * ((r == c ? 1.0 : 0.0) + f * weights_[r] * weights_[c]);
    }
  }
  return out;
}

EigenDecomposition CoupledSubspace::reduced_eigen(double s) const { return eig_unitary(reduced_operator(s)); }

CVector CoupledSubspace::lift(const CVector& coords) const { return basis_ * coords; }

double CoupledSubspace::overlap_with_v(const CVector& coords) const {
  Complex acc{};
  for (std::size_t k = 0; k < weights_.size(); ++k) acc += weights_[k] * coords[k];
  return std::abs(acc);
}

// ---------------------------------------------------------------- tracking

std::vector<double> CurveSet::grid() const {
  std::vector<double> g;
  if (curves.empty()) return g;
  for (const auto& sample : curves.front().samples) g.push_back(sample.s);
  return g;
}

std::size_t CurveSet::curve_for_state(const CVector& state) const {
  std::size_t best = 0;
  double best_overlap = -1.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& first = curves[i].samples.front();
    double ov;
    if (!first.vector.data().empty()) {
      ov = std::abs(inner(first.vector, state));
    } else if (!curves[i].spectator) {
      ov = std::abs(inner(subspace.lift(curves[i].coordinates.front()), state));
    } else {
      ov = 0.0;
    }
    if (ov > best_overlap) {
      best_overlap = ov;
      best = i;
    }
  }
  return best;
}

namespace {

struct Match {
  std::vector<std::size_t> column;  // column[curve] = eigen column
  double min_overlap = 1.0;
};

Match greedy_match(const std::vector<CVector>& previous, const CMatrix& vectors) {
  const std::size_t m = previous.size();
  std::vector<double> ov(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Complex acc{};
      for (std::size_t r = 0; r < m; ++r) acc += std::conj(previous[i][r]) * vectors(r, j);
      ov[i * m + j] = std::abs(acc);
    }
  Match match;
  match.column.assign(m, m);
  std::vector<bool> row_used(m, false), col_used(m, false);
  for (std::size_t round = 0; round < m; ++round) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (col_used[j]) continue;
        if (ov[i * m + j] > best) {
          best = ov[i * m + j];
          bi = i;
          bj = j;
        }
      }
    }
    row_used[bi] = col_used[bj] = true;
    match.column[bi] = bj;
    match.min_overlap = std::min(match.min_overlap, best);
  }
  return match;
}

class Tracker {
 public:
  Tracker(const CoupledSubspace& subspace, const TrackOptions& options) : sub_(subspace), opt_(options) {}

  void start(double s) {
    const auto eig = sub_.reduced_eigen(s);
    const std::size_t m = sub_.coupled_dim();
    lifted_.resize(m);
    coords_.resize(m);
    history_theta_.assign(m, {});
    history_coords_.assign(m, {});
    for (std::size_t k = 0; k < m; ++k) {
      lifted_[k] = eig.values[k];
      coords_[k] = eig.vectors.column(k);
    }
    record(s);
  }

  void advance(double sa, double sb, int depth) {
    const auto eig = sub_.reduced_eigen(sb);
    const Match match = greedy_match(coords_, eig.vectors);
    if (match.min_overlap < opt_.overlap_threshold && sa != sb) {
      if (depth >= opt_.max_refinement) {
        throw Error(ErrorCode::TrackingFailure,
                    "eigenvector continuation failed near s = " + std::to_string(sb) + " (degeneracy on the path?)");
      }
      const double mid = 0.5 * (sa + sb);
      advance(sa, mid, depth + 1);
      advance(mid, sb, depth + 1);
      return;
    }
    for (std::size_t k = 0; k < coords_.size(); ++k) {
      const std::size_t col = match.column[k];
      CVector next = eig.vectors.column(col);
      const Complex ov = inner(coords_[k], next);
      if (std::abs(ov) > 0.0) next *= std::conj(ov) / std::abs(ov);
      lifted_[k] += wrap_signed(eig.values[col] - wrap_angle(lifted_[k]));
      coords_[k] = std::move(next);
    }
    record(sb);
  }

  std::vector<double> grid;
  std::vector<std::vector<double>> history_theta_;
  std::vector<std::vector<CVector>> history_coords_;

 private:
  void record(double s) {
    grid.push_back(s);
    for (std::size_t k = 0; k < coords_.size(); ++k) {
      history_theta_[k].push_back(lifted_[k]);
      history_coords_[k].push_back(coords_[k]);
    }
  }

  const CoupledSubspace& sub_;
  TrackOptions opt_;
  std::vector<double> lifted_;
  std::vector<CVector> coords_;
};

}  // namespace

CurveSet track_curves(const FloquetSystem& sys, double s_from, double s_to, int n_samples, const TrackOptions& options) {
  if (n_samples < 2) throw Error(ErrorCode::InvalidArgument, "track_curves needs n_samples >= 2");
  CurveSet set{{}, CoupledSubspace(sys)};
  const CoupledSubspace& sub = set.subspace;

  Tracker tracker(sub, options);
  if (sub.coupled_dim() > 0) {
    tracker.start(s_from);
    for (int k = 1; k < n_samples; ++k) {
      const double sa = s_from + (s_to - s_from) * (k - 1) / (n_samples - 1);
      const double sb = k == n_samples - 1 ? s_to : s_from + (s_to - s_from) * k / (n_samples - 1);
      tracker.advance(sa, sb, 0);
    }
  } else {
    for (int k = 0; k < n_samples; ++k) {
      tracker.grid.push_back(k == n_samples - 1 ? s_to : s_from + (s_to - s_from) * k / (n_samples - 1));
    }
  }
  const auto& grid = tracker.grid;

  for (std::size_t k = 0; k < sub.coupled_dim(); ++k) {
    EigenangleCurve curve;
    curve.samples.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto& sample = curve.samples[i];
      sample.s = grid[i];
      sample.theta = tracker.history_theta_[k][i];
      sample.overlap = sub.overlap_with_v(tracker.history_coords_[k][i]);
      if (options.store_vectors) sample.vector = sub.lift(tracker.history_coords_[k][i]);
    }
    curve.coordinates = std::move(tracker.history_coords_[k]);
    set.curves.push_back(std::move(curve));
  }
  for (std::size_t k = 0; k < sub.spectator_angles().size(); ++k) {
    EigenangleCurve curve;
    curve.spectator = true;
    const CVector vec = options.store_vectors ? sub.spectator_vectors().column(k) : CVector{};
    curve.samples.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      curve.samples[i].s = grid[i];
      curve.samples[i].theta = sub.spectator_angles()[k];
      curve.samples[i].vector = vec;
    }
    set.curves.push_back(std::move(curve));
  }

  std::stable_sort(set.curves.begin(), set.curves.end(), [](const EigenangleCurve& a, const EigenangleCurve& b) {
    const double ta = a.samples.front().theta;
    const double tb = b.samples.front().theta;
    if (std::abs(ta - tb) > 1e-12) return ta < tb;
    return !a.spectator && b.spectator;
  });
  for (auto& curve : set.curves) {
    curve.branch_offset = static_cast<long>(std::floor(curve.samples.back().theta / kTwoPi));
  }
  return set;
}

double detect_anholonomy(const EigenangleCurve& curve) {
  if (curve.samples.size() < 2) throw Error(ErrorCode::BadSpan, "curve has fewer than two samples");
  const double s0 = curve.samples.front().s;
  const double s1 = curve.samples.back().s;
  if (std::abs(s0) > 1e-12 || std::abs(s1 - kTwoPi) > 1e-9) {
    throw Error(ErrorCode::BadSpan, "anholonomy needs a curve spanning s = 0 to 2pi");
  }
  return curve.samples.back().theta - curve.samples.front().theta;
}

// ---------------------------------------------------------------- gaps

GapReport min_gap(const CurveSet& set, int target_index, const GapOptions& options) {
  const auto& curves = set.curves;
  if (curves.size() < 2) throw Error(ErrorCode::InvalidArgument, "min_gap needs at least two curves");
  if (target_index < 0 || static_cast<std::size_t>(target_index) >= curves.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "target curve index out of range");
  }
  std::vector<int> others = options.against;
  if (others.empty()) {
    for (int j = 0; j < static_cast<int>(curves.size()); ++j)
      if (j != target_index) others.push_back(j);
  }
  for (int j : others) {
    if (j < 0 || static_cast<std::size_t>(j) >= curves.size() || j == target_index) {
      throw Error(ErrorCode::IndexOutOfRange, "comparison curve index out of range");
    }
  }

  const auto& target = curves[static_cast<std::size_t>(target_index)];
  const std::size_t n = target.samples.size();
  GapReport report;
  report.min_gap = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (int j : others) {
      const double d = circular_distance(target.samples[k].theta, curves[static_cast<std::size_t>(j)].samples[k].theta);
      if (d < report.min_gap) {
        report.min_gap = d;
        report.s_at_min = target.samples[k].s;
        report.curve_index_pair = {target_index, j};
        best_k = k;
      }
    }
  }

  if (!options.refine || n < 2) return report;
  const double lo = target.samples[best_k == 0 ? 0 : best_k - 1].s;
  const double hi = target.samples[best_k + 1 == n ? n - 1 : best_k + 1].s;
  if (!(hi > lo)) return report;

  const CoupledSubspace& sub = set.subspace;
  // Evaluates the gap at s, identifying coupled curves by their coordinates
  // at the best grid sample.
  auto gap_at = [&](double s, int* partner) {
    std::vector<double> angle_of(curves.size(), 0.0);
    std::vector<bool> used(sub.coupled_dim(), false);
    EigenDecomposition eig;
    if (sub.coupled_dim() > 0) eig = sub.reduced_eigen(s);
    auto resolve = [&](int idx) {
      const auto& c = curves[static_cast<std::size_t>(idx)];
      if (c.spectator) return c.samples[best_k].theta;
      const CVector& ref = c.coordinates[best_k];
      std::size_t best_col = 0;
      double best_ov = -1.0;
      for (std::size_t col = 0; col < sub.coupled_dim(); ++col) {
        if (used[col]) continue;
        Complex acc{};
        for (std::size_t r = 0; r < ref.dim(); ++r) acc += std::conj(ref[r]) * eig.vectors(r, col);
        if (std::abs(acc) > best_ov) {
          best_ov = std::abs(acc);
          best_col = col;
        }
      }
      used[best_col] = true;
      return eig.values[best_col];
    };
    const double t = resolve(target_index);
    double g = std::numeric_limits<double>::infinity();
    if (options.against.empty()) {
      // Every other level counts: all remaining coupled angles plus spectators.
      for (std::size_t col = 0; col < sub.coupled_dim(); ++col) {
        if (used[col]) continue;
        g = std::min(g, circular_distance(t, eig.values[col]));
      }
      for (int j : others) {
        if (curves[static_cast<std::size_t>(j)].spectator) {
          const double d = circular_distance(t, curves[static_cast<std::size_t>(j)].samples[best_k].theta);
          if (d < g) {
            g = d;
            if (partner) *partner = j;
          }
        }
      }
      return g;
    }
    for (int j : others) {
      const double d = circular_distance(t, resolve(j));
      if (d < g) {
        g = d;
        if (partner) *partner = j;
      }
    }
    return g;
  };

  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = gap_at(x1, nullptr), f2 = gap_at(x2, nullptr);
  while (b - a > options.s_tolerance) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = gap_at(x1, nullptr);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = gap_at(x2, nullptr);
    }
  }
  const double s_best = f1 < f2 ? x1 : x2;
  const double g_best = std::min(f1, f2);
  if (g_best < report.min_gap) {
    report.min_gap = g_best;
    report.s_at_min = s_best;
  }
  return report;
}

double instantaneous_gap(const CoupledSubspace& subspace, double s) {
  if (subspace.coupled_dim() < 2) return kTwoPi;
  const auto eig = subspace.reduced_eigen(s);
  const auto& th = eig.values;  // ascending in [0, 2pi)
  double g = th.front() + kTwoPi - th.back();
  for (std::size_t k = 1; k < th.size(); ++k) g = std::min(g, th[k] - th[k - 1]);
  return g;
}

SpectrumSplit split_spectrum(const CMatrix& u, const EigenDecomposition& eig, const CVector& v, double cluster_tol,
                             double overlap_tol) {
  SpectrumSplit out;
  const std::size_t n = eig.values.size();
  for (const auto& members : cluster_angles(eig.values, cluster_tol)) {
    CVector c(members.size());
    for (std::size_t j = 0; j < members.size(); ++j) {
      Complex acc{};
      for (std::size_t r = 0; r < n; ++r) acc += std::conj(eig.vectors(r, members[j])) * v[r];
      c[j] = acc;
    }
    const double w = c.norm();
    if (w <= overlap_tol) {
      for (std::size_t idx : members) out.spectator_angles.push_back(eig.values[idx]);
      continue;
    }
    const CVector p = combine(eig.vectors, members, (1.0 / w) * c);
    out.coupled_angles.push_back(wrap_angle(-std::arg(inner(p, u * p))));
    out.coupled_overlaps.push_back(w);
    std::size_t skip = 0;
    for (std::size_t j = 1; j < members.size(); ++j)
      if (std::abs(c[j]) > std::abs(c[skip])) skip = j;
    for (std::size_t j = 0; j < members.size(); ++j)
      if (j != skip) out.spectator_angles.push_back(eig.values[members[j]]);
  }
  std::sort(out.spectator_angles.begin(), out.spectator_angles.end());
  return out;
}

void write_curves_csv(std::ostream& out, const CurveSet& set) {
  out << "s,curve_id,theta_lifted,theta_mod2pi,overlap_with_v\n";
  char line[192];
  for (std::size_t id = 0; id < set.curves.size(); ++id) {
    const auto& curve = set.curves[id];
    for (std::size_t k = 0; k < curve.samples.size(); ++k) {
      const auto& sample = curve.samples[k];
      std::snprintf(line, sizeof(line), "%.17g,%zu,%.17g,%.17g,%.17g\n", sample.s, id, sample.theta,
                    wrap_angle(sample.theta), sample.overlap);
      out << line;
    }
  }
}

}  // namespace anholo
