#include "pdilqr/models/gait.hpp"

#include <cmath>
#include <stdexcept>

namespace pdilqr::models {

GaitSchedule GaitSchedule::trot(double period) { return {period, 0.5, {0.0, 0.5, 0.5, 0.0}}; }

GaitSchedule GaitSchedule::stand() { return {1.0, 1.0, {0.0, 0.0, 0.0, 0.0}}; }

void GaitSchedule::validate() const {
  if (!(period > 0.0)) throw std::invalid_argument("GaitSchedule: period must be positive");
  if (!(duty > 0.0 && duty <= 1.0)) throw std::invalid_argument("GaitSchedule: duty must lie in (0, 1]");
}

double GaitSchedule::phase(int leg, double t) const {
  const double s = t / period + phase_offsets[leg];
  return s - std::floor(s);
}

Contacts GaitSchedule::contacts(double t) const {
  Contacts c{};
  for (int j = 0; j < kLegs; ++j) c[j] = duty >= 1.0 || phase(j, t) < duty;
  return c;
}

double GaitSchedule::stance_start(int leg, double t) const {
  if (duty >= 1.0) return 0.0;
  const double ph = phase(leg, t);
  if (ph < duty) return t - ph * period;
  return t + (1.0 - ph) * period;
}

}  // namespace pdilqr::models
