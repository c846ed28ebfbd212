#pragma once

// Seeded generators for quaternions and matrices used by the property checks.

#include <cstdint>
#include <random>

#include "hyperma/quat_matrix.hpp"

namespace hyperma {

using Rng = std::mt19937_64;

// Independent stream for sample `index` of check `stream` under `seed`; the
// draw for a sample never depends on how samples are scheduled.
Rng sample_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

double uniform(Rng& rng, double lo = -1.0, double hi = 1.0);

// Components uniform in [-1, 1].
Quaternion random_quaternion(Rng& rng);

QuatVector random_quat_vector(std::size_t n, Rng& rng);

QuatMatrix random_quat_matrix(std::size_t n, Rng& rng);

HyperHermitianMatrix random_hyperhermitian(std::size_t n, Rng& rng);

// Complex Hermitian (y = z = 0 everywhere), viewed as hyperhermitian.
HyperHermitianMatrix random_complex_hermitian(std::size_t n, Rng& rng);

// C*C + shift I.
HyperHermitianMatrix random_positive_definite(std::size_t n, Rng& rng, double shift = 0.1);

// C*C with C of rank below n when rank_deficient is set.
HyperHermitianMatrix random_nonnegative(std::size_t n, Rng& rng, bool rank_deficient = false);

}  // namespace hyperma
