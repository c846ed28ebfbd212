#pragma once

// Mixed discriminants of hyperhermitian matrices and the identities and
// inequalities they satisfy.

#include <cstddef>
#include <span>
#include <vector>

#include "hyperma/quat_matrix.hpp"

namespace hyperma {

using MatrixList = std::vector<HyperHermitianMatrix>;

// det(A_1, ..., A_n): the coefficient of l_1 ... l_n in det(sum l_i A_i)
// divided by n!, evaluated as
//   (1/n!) sum_{S subset {1..n}} (-1)^(n-|S|) det(sum_{i in S} A_i).
// Arguments are put in a canonical order first, so the value is bit-identical
// under any permutation of the list.
double mixed_discriminant(std::span<const HyperHermitianMatrix> mats);

// det(X, A[k]) with k = n - 1 copies of A; linear in X.
double mixed_with_repeats(const HyperHermitianMatrix& x, const HyperHermitianMatrix& a, std::size_t k);

// scale = 1 + max(|lhs|, |rhs|); tolerances below are multiples of it.
double residual_scale(double lhs, double rhs);

struct AleksandrovResult {
    double lhs = 0.0;  // det(A_1..A_{n-1}, X)^2
    double rhs = 0.0;  // det(A_1..A_{n-1}, A_{n-1}) * det(A_1..A_{n-2}, X, X)
    bool holds = false;
};

// Requires n - 1 positive definite matrices; throws NotPositiveDefiniteError otherwise.
AleksandrovResult aleksandrov_check(std::span<const HyperHermitianMatrix> mats, const HyperHermitianMatrix& x);

// Real basis of the hyperhermitian n x n matrices: E_ii, then for i < j the
// four matrices carrying e_a at (i, j) and conj(e_a) at (j, i). 2n^2 - n members.
std::vector<HyperHermitianMatrix> hyperhermitian_basis(std::size_t n);

struct Signature {
    std::size_t plus = 0;
    std::size_t minus = 0;
    std::size_t zero = 0;
    std::vector<double> gram_eigenvalues;
};

// Inertia of B(X, Y) = det(X, Y, A_1, ..., A_{n-2}) on the hyperhermitian space.
// mats holds the n - 2 positive definite A's (empty for n = 2).
Signature signature_of_B(std::span<const HyperHermitianMatrix> mats, std::size_t n);

// Placement of the vector entry in M_ij built from a_j and u_{in}.
enum class ClaimProductOrder {
    column_times_conj,  // u_{in} * conj(a_j)
    column_times_plain,  // u_{in} * a_j
    conj_times_column,  // conj(a_j) * u_{in}
    plain_times_column,  // a_j * u_{in}
};

// The order selected by the random-input oracle in the test suite: only the
// two right-multiplied forms satisfy the identity, and conj matches the
// a_{j-bar} notation.
inline constexpr ClaimProductOrder kClaimOrder = ClaimProductOrder::column_times_conj;

struct Claim214Result {
    double lhs = 0.0;             // det(M + M*, U[n-1])
    double rhs = 0.0;             // 2 Re(a_n) det U
    double normalized_lhs = 0.0;  // n * lhs, the directional derivative of det along M + M*
    double scale = 1.0;
    bool holds = false;             // |lhs - rhs| <= 1e-9 scale
    bool holds_normalized = false;  // |n lhs - rhs| <= 1e-9 scale
};

QuatMatrix claim214_matrix(std::span<const Quaternion> a, const HyperHermitianMatrix& u,
                           ClaimProductOrder order = kClaimOrder);

Claim214Result claim214_check(std::span<const Quaternion> a, const HyperHermitianMatrix& u,
                              ClaimProductOrder order = kClaimOrder);

struct Cor217Result {
    double lhs = 0.0;    // |det(XY* + YX*, A[n-1])|
    double bound = 0.0;  // eps^2 det(XX*, A[n-1]) + eps^-2 det(YY*, A[n-1])
    bool holds = false;
};

// Throws NotPositiveDefiniteError for non-PD A, PreconditionError for eps <= 0.
Cor217Result cor217_check(const QuatMatrix& x, const QuatMatrix& y, const HyperHermitianMatrix& a, double eps);

}  // namespace hyperma
