#pragma once

#include "pdilqr/types.hpp"

namespace testutil {

// A = B = Q = R = P_T = 1, everything else zero, one stage.
inline pdilqr::QPData scalar_one_step(double dx0 = 0.0) {
  pdilqr::QPData qp = pdilqr::QPData::zeros(0, 1, 1);
  qp.A[0](0, 0) = 1.0;
  qp.B[0](0, 0) = 1.0;
  qp.Q[0](0, 0) = 1.0;
  qp.R[0](0, 0) = 1.0;
  qp.P_terminal(0, 0) = 1.0;
  qp.dx0(0) = dx0;
  return qp;
}

}  // namespace testutil
