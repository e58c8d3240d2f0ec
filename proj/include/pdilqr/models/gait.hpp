#pragma once

#include <array>

namespace pdilqr::models {

inline constexpr int kLegs = 4;  // FL, FR, RL, RR
using Contacts = std::array<bool, kLegs>;

/// Periodic gait: leg j is in stance while frac(t / period + offset_j) < duty.
struct GaitSchedule {
  double period = 0.5;
  double duty = 0.5;
  std::array<double, kLegs> phase_offsets{0.0, 0.5, 0.5, 0.0};

  static GaitSchedule trot(double period = 0.5);
  static GaitSchedule stand();

  double phase(int leg, double t) const;
  Contacts contacts(double t) const;
  double stance_duration() const { return duty * period; }

  /// Start time of the stance phase containing t, or of the next stance when
  /// the leg is swinging at t.
  double stance_start(int leg, double t) const;

  /// Throws std::invalid_argument on a non-positive period or duty outside (0, 1].
  void validate() const;
};

}  // namespace pdilqr::models
