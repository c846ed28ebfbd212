#include "hyperma/random.hpp"

namespace hyperma {

Rng sample_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Quaternion random_quaternion(Rng& rng) {
    const double t = uniform(rng);
    const double x = uniform(rng);
    const double y = uniform(rng);
    const double z = uniform(rng);
    return {t, x, y, z};
}

QuatVector random_quat_vector(std::size_t n, Rng& rng) {
    QuatVector v(n);
    for (auto& q : v) q = random_quaternion(rng);
    return v;
}

QuatMatrix random_quat_matrix(std::size_t n, Rng& rng) {
    QuatMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = random_quaternion(rng);
    }
    return m;
}

HyperHermitianMatrix random_hyperhermitian(std::size_t n, Rng& rng) {
    return HyperHermitianMatrix::symmetrized(random_quat_matrix(n, rng));
}

HyperHermitianMatrix random_complex_hermitian(std::size_t n, Rng& rng) {
    QuatMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double t = uniform(rng);
            const double x = uniform(rng);
            m(i, j) = {t, x, 0.0, 0.0};
        }
    }
    return HyperHermitianMatrix::symmetrized(m);
}

HyperHermitianMatrix random_positive_definite(std::size_t n, Rng& rng, double shift) {
    const QuatMatrix c = random_quat_matrix(n, rng);
    return HyperHermitianMatrix::symmetrized(conj_transpose(c) * c + shift * QuatMatrix::identity(n));
}

HyperHermitianMatrix random_nonnegative(std::size_t n, Rng& rng, bool rank_deficient) {
    QuatMatrix c = random_quat_matrix(n, rng);
    if (rank_deficient && n > 0) {
        for (std::size_t j = 0; j < n; ++j) c(n - 1, j) = Quaternion{};
    }
    return HyperHermitianMatrix::symmetrized(conj_transpose(c) * c);
}

}  // namespace hyperma
