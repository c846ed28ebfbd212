#pragma once

// Square quaternionic matrices, the hyperhermitian subclass, and the Moore
// determinant together with its spectral and definiteness companions.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hyperma/errors.hpp"
#include "hyperma/quaternion.hpp"

namespace hyperma {

using QuatVector = std::vector<Quaternion>;

class QuatMatrix {
public:
    QuatMatrix() = default;
    explicit QuatMatrix(std::size_t n) : n_{n}, entries_(n * n) {}
    QuatMatrix(std::size_t n, std::vector<Quaternion> row_major);
    QuatMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows);

    static QuatMatrix identity(std::size_t n);
    static QuatMatrix diagonal(std::span<const double> diag);

    std::size_t size() const { return n_; }

    Quaternion& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const Quaternion& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    std::span<const Quaternion> data() const { return entries_; }

    bool operator==(const QuatMatrix&) const = default;

    QuatMatrix& operator+=(const QuatMatrix& o);
    QuatMatrix& operator-=(const QuatMatrix& o);
    QuatMatrix& operator*=(double s);

private:
    std::size_t n_ = 0;
    std::vector<Quaternion> entries_;
};

QuatMatrix operator+(QuatMatrix a, const QuatMatrix& b);
QuatMatrix operator-(QuatMatrix a, const QuatMatrix& b);
QuatMatrix operator*(double s, QuatMatrix a);
QuatMatrix operator*(const QuatMatrix& a, const QuatMatrix& b);
QuatVector operator*(const QuatMatrix& a, const QuatVector& v);

// (C*)_ij = conj(C_ji)
QuatMatrix conj_transpose(const QuatMatrix& c);

// max_ij |a_ij - conj(a_ji)|
double hyperhermitian_residue(const QuatMatrix& a);

bool is_hyperhermitian(const QuatMatrix& a, double tol = 1e-12);

// A matrix with A* = A. The invariant is checked on construction; arithmetic
// that preserves it (sums, real multiples, congruence) stays in the type.
class HyperHermitianMatrix {
public:
    HyperHermitianMatrix() = default;
    explicit HyperHermitianMatrix(std::size_t n) : m_(n) {}

    // Throws PreconditionError when the residue exceeds tol.
    explicit HyperHermitianMatrix(QuatMatrix m, double tol = 1e-12);
    HyperHermitianMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows);

    // (M + M*)/2, exactly hyperhermitian.
    static HyperHermitianMatrix symmetrized(const QuatMatrix& m);
    static HyperHermitianMatrix identity(std::size_t n);
    static HyperHermitianMatrix diagonal(std::span<const double> diag);
    static HyperHermitianMatrix zero(std::size_t n) { return HyperHermitianMatrix(n); }

    std::size_t size() const { return m_.size(); }
    const Quaternion& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const QuatMatrix& matrix() const { return m_; }

    bool operator==(const HyperHermitianMatrix&) const = default;

    HyperHermitianMatrix& operator+=(const HyperHermitianMatrix& o);
    HyperHermitianMatrix& operator-=(const HyperHermitianMatrix& o);
    HyperHermitianMatrix& operator*=(double s);

private:
    QuatMatrix m_;
};

HyperHermitianMatrix operator+(HyperHermitianMatrix a, const HyperHermitianMatrix& b);
HyperHermitianMatrix operator-(HyperHermitianMatrix a, const HyperHermitianMatrix& b);
HyperHermitianMatrix operator*(double s, HyperHermitianMatrix a);

// C* A C; hyperhermitian for every C.
HyperHermitianMatrix congruence(const HyperHermitianMatrix& a, const QuatMatrix& c);

// Upper-left k x k block.
HyperHermitianMatrix leading_minor(const HyperHermitianMatrix& a, std::size_t k);

// sigma[i] is the image of i; indices are 0-based.
using Permutation = std::vector<int>;
using Cycle = std::vector<int>;

// Disjoint cycles of sigma, each rotated to start at its minimum, ordered by
// descending leading element; fixed points appear as 1-cycles.
// Throws PreconditionError when sigma is not a bijection of {0..n-1}.
std::vector<Cycle> canonical_cycles(std::span<const int> sigma);

// Sign of sigma, (-1)^(n - number of cycles).
int permutation_sign(std::span<const int> sigma);

// Largest dimension evaluated by the permutation expansion; beyond it
// moore_det uses the eigenvalue product.
inline constexpr std::size_t kMooreExpansionCutoff = 8;

// Imaginary residue accepted on values that must be real: tol * (1 + |value|).
inline constexpr double kRealResidueTol = 1e-10;

// Moore determinant by the signed sum over all permutations written in
// canonical cycle form; every cycle contributes a_{k1 k2} a_{k2 k3} ... a_{kj k1}
// and the products are taken left to right in canonical order.
// Throws ImaginaryResidueError if the sum is not real.
double moore_det_expansion(const HyperHermitianMatrix& a);

// Moore determinant; expansion for n <= kMooreExpansionCutoff, eigenvalue
// product above.
double moore_det(const HyperHermitianMatrix& a);

// The 2n x 2n complex Hermitian matrix [[alpha, beta], [-conj(beta), conj(alpha)]]
// where a = alpha + beta j entrywise, alpha = t + x i, beta = y + z i.
Eigen::MatrixXcd complex_adjoint(const QuatMatrix& a);

// Relative gap tolerated between the two copies of each eigenvalue of the
// complex adjoint.
inline constexpr double kEigenPairTol = 1e-8;

// n real eigenvalues in ascending order. The complex adjoint carries every
// quaternionic eigenvalue twice; the sorted spectrum is paired off.
// Throws ImaginaryResidueError (broken pairing) when a pair splits.
std::vector<double> eigenvalues(const HyperHermitianMatrix& a);

double min_eigenvalue(const HyperHermitianMatrix& a);

// Minors whose Moore determinant is below this magnitude count as a
// definiteness boundary, not as positive.
inline constexpr double kSylvesterBoundary = 1e-10;

// Sylvester criterion: every leading minor has Moore determinant > kSylvesterBoundary.
bool is_positive_definite(const HyperHermitianMatrix& a);

// xi* A xi = sum conj(xi_i) a_ij xi_j
double quadratic_form(const HyperHermitianMatrix& a, std::span<const Quaternion> xi);

}  // namespace hyperma
