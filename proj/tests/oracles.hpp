#pragma once

// Test-only reference computations. Each one follows a route that does not
// share code with the library path it is used to check.

#include <cmath>
#include <complex>
#include <vector>

#include <algorithm>

#include <Eigen/Dense>

#include "hyperma/quat_matrix.hpp"

namespace oracle {

using hyperma::HyperHermitianMatrix;
using hyperma::Quaternion;
using hyperma::QuatVector;

// Usual determinant of the complex matrix t + x i (y, z must vanish), by LU.
inline double complex_hermitian_det(const HyperHermitianMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {a(i, j).t, a(i, j).x};
    }
    return m.partialPivLu().determinant().real();
}

// det of the 2n x 2n complex adjoint, built here independently; equals the
// square of the Moore determinant.
inline double adjoint_det(const HyperHermitianMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXcd m(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Quaternion& q = a(i, j);
            m(i, j) = {q.t, q.x};
            m(i, j + n) = {q.y, q.z};
            m(i + n, j) = {-q.y, q.z};
            m(i + n, j + n) = {q.t, -q.x};
        }
    }
    return m.partialPivLu().determinant().real();
}

// xi* A xi written out on R^{4n} as the symmetric real matrix S with
// xi* A xi = v^T S v, v the stacked components of xi.
inline Eigen::MatrixXd real_form(const HyperHermitianMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (int p = 0; p < 4; ++p) {
                for (int q = 0; q < 4; ++q) {
                    const Quaternion term = conj(Quaternion::unit(p)) * a(i, j) * Quaternion::unit(q);
                    s(4 * i + p, 4 * j + q) += term.t;
                }
            }
        }
    }
    return 0.5 * (s + s.transpose());
}

// Minimiser of xi* A xi over unit xi, found by power iteration on
// sigma I - S in R^{4n}; returns the minimising quaternion vector.
inline QuatVector rayleigh_minimiser(const HyperHermitianMatrix& a, int iterations = 4000) {
    const Eigen::MatrixXd s = real_form(a);
    const auto dim = s.rows();
    const double sigma = s.norm() + 1.0;
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(dim, 1.0, 2.0);
    for (int it = 0; it < iterations; ++it) {
        v = sigma * v - s * v;
        v.normalize();
    }
    QuatVector xi(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) xi[i] = {v(4 * i), v(4 * i + 1), v(4 * i + 2), v(4 * i + 3)};
    return xi;
}

// det of the complex adjoint of a general quaternion matrix. Real and
// non-negative; equals the Moore determinant of C* C.
inline double study_det(const hyperma::QuatMatrix& c) {
    const auto n = static_cast<Eigen::Index>(c.size());
    Eigen::MatrixXcd m(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Quaternion& q = c(i, j);
            m(i, j) = {q.t, q.x};
            m(i, j + n) = {q.y, q.z};
            m(i + n, j) = {-q.y, q.z};
            m(i + n, j + n) = {q.t, -q.x};
        }
    }
    return m.partialPivLu().determinant().real();
}

// Eigenvalues of A from the real form, where each one appears four times.
inline std::vector<double> spectrum(const HyperHermitianMatrix& a) {
    const Eigen::VectorXd all = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(real_form(a)).eigenvalues();
    std::vector<double> out;
    for (Eigen::Index k = 0; k < all.size(); k += 4) out.push_back(all.segment(k, 4).mean());
    return out;
}

inline double moore_det(const HyperHermitianMatrix& a) {
    double p = 1.0;
    for (double l : oracle::spectrum(a)) p *= l;
    return p;
}

inline double min_eigenvalue(const HyperHermitianMatrix& a) { return oracle::spectrum(a).front(); }

// Coefficient of l_1 ... l_n in det(sum l_i A_i) over n!, extracted by the
// +-1 sign sum: sum_eps (prod eps) det(sum eps_i A_i) = 2^n n! D.
inline double mixed_discriminant(const std::vector<HyperHermitianMatrix>& mats) {
    const std::size_t n = mats.size();
    double sum = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        HyperHermitianMatrix s(mats.front().size());
        double sign = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                s -= mats[i];
                sign = -sign;
            } else {
                s += mats[i];
            }
        }
        sum += sign * oracle::moore_det(s);
    }
    double denom = std::ldexp(1.0, static_cast<int>(n));
    for (std::size_t k = 2; k <= n; ++k) denom *= static_cast<double>(k);
    return sum / denom;
}

// Entry (i, j) = sum_{a,b} e_a H[4i+a][4j+b] conj(e_b), symmetrized.
inline HyperHermitianMatrix hyper_from_real(const Eigen::MatrixXd& h) {
    const std::size_t n = static_cast<std::size_t>(h.rows()) / 4;
    hyperma::QuatMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Quaternion e{};
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    const double v = h(static_cast<Eigen::Index>(4 * i + a), static_cast<Eigen::Index>(4 * j + b));
                    e += Quaternion::unit(a) * v * conj(Quaternion::unit(b));
                }
            }
            m(i, j) = e;
        }
    }
    return HyperHermitianMatrix::symmetrized(m);
}

// Diagonal units, then e_a at (i, j) with its conjugate at (j, i) for i < j.
inline std::vector<HyperHermitianMatrix> hyperhermitian_basis(std::size_t n) {
    std::vector<HyperHermitianMatrix> out;
    for (std::size_t i = 0; i < n; ++i) {
        hyperma::QuatMatrix m(n);
        m(i, i) = Quaternion{1, 0, 0, 0};
        out.emplace_back(m);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (int a = 0; a < 4; ++a) {
                hyperma::QuatMatrix m(n);
                m(i, j) = Quaternion::unit(a);
                m(j, i) = conj(Quaternion::unit(a));
                out.emplace_back(m);
            }
        }
    }
    return out;
}

}  // namespace oracle
