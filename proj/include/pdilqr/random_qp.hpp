#pragma once

#include <cstdint>
#include <random>

#include "pdilqr/scan_lqr.hpp"
#include "pdilqr/types.hpp"

namespace pdilqr {

/// Random well-conditioned LQ instance: A with spectral norm <= 0.95, stage
/// Hessians [Q S'; S R] positive definite with R >= 0.1 I, PSD terminal cost.
QPData random_qp(int horizon, int nx, int nu, std::mt19937_64& rng);

/// Random symmetric PSD matrix with eigenvalues in [0, 1].
Matrix random_psd(int n, std::mt19937_64& rng);

/// Random value element with P, C PSD (eigenvalues in [0, 1]) and A of
/// spectral norm <= 1.
ValueElement random_value_element(int n, std::mt19937_64& rng);

TrajElement random_traj_element(int n, std::mt19937_64& rng);

}  // namespace pdilqr
