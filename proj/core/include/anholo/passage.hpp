#pragma once

#include <functional>
#include <vector>

#include "anholo/floquet.hpp"
#include "anholo/numerics.hpp"

namespace anholo {

/// Monotone grid {s_0 = 0, ..., s_L = s_max}.
class Schedule {
 public:
  Schedule() = default;
  /// Throws InvalidArgument unless values start at 0 and never decrease.
  explicit Schedule(std::vector<double> values);

  int steps() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double s_max() const { return values_.back(); }
  double operator[](std::size_t l) const { return values_[l]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

struct PassageResult {
  CVector final_state;
  double error = 0.0;
  int steps = 0;
  /// |<target|Psi_l>| for l = 0..L, filled when requested.
  std::vector<double> overlap_history;
};

/// sqrt(1 - |<target|psi>|^2), clamped at 0.
double passage_error(const CVector& psi, const CVector& target);

/// Applies U_{s_1}, ..., U_{s_L} to psi0 in that order.
PassageResult run_passage(const KickedMap& map, const Schedule& schedule, const CVector& psi0, const CVector& target,
                          bool record_history = false);

Schedule linear_schedule(double s_max, int steps);

/// Local adiabatic step density ds ~ gap(s)^exponent.
///
/// The cumulative integral of gap^-exponent is tabulated once on a grid that is
/// bisected wherever the gap changes by more than 10% across an interval, so
/// schedules for many L can be drawn cheaply.
class RolandCerfDensity {
 public:
  RolandCerfDensity(const std::function<double(double)>& gap_fn, double s_max, double exponent = 2.0,
                    int base_intervals = 4096);

  Schedule schedule(int steps) const;
  double s_max() const noexcept { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
};

Schedule roland_cerf_schedule(const std::function<double(double)>& gap_fn, double s_max, int steps,
                              double exponent = 2.0);

using ScheduleFamily = std::function<Schedule(int)>;

struct RunningTimeOptions {
  long max_steps = 1L << 22;
};

/// Smallest L with passage error below epsilon: L doubles until two
/// consecutive sizes succeed, then the last bracket is bisected.
long running_time(const KickedMap& map, const ScheduleFamily& family, const CVector& psi0, const CVector& target,
                  double epsilon, const RunningTimeOptions& options = {});

}  // namespace anholo
