#include "hyperma/quat_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

namespace hyperma {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionError(os.str());
    }
}

double checked_real(const Quaternion& q, const char* what) {
    if (imag_abs(q) > kRealResidueTol * (1.0 + std::abs(q.t))) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": imaginary residue " << imag_abs(q) << " on value " << q.t;
        throw ImaginaryResidueError(os.str());
    }
    return q.t;
}

}  // namespace

QuatMatrix::QuatMatrix(std::size_t n, std::vector<Quaternion> row_major) : n_{n}, entries_(std::move(row_major)) {
    if (entries_.size() != n * n) {
        throw DimensionError("QuatMatrix: expected " + std::to_string(n * n) + " entries, got " +
                             std::to_string(entries_.size()));
    }
    for (const auto& q : entries_) {
        if (!isfinite(q)) throw PreconditionError("QuatMatrix: non-finite entry");
    }
}

QuatMatrix::QuatMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows) : n_{rows.size()} {
    entries_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) throw DimensionError("QuatMatrix: rows must all have length n");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

QuatMatrix QuatMatrix::identity(std::size_t n) {
    QuatMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Quaternion::one();
    return m;
}

QuatMatrix QuatMatrix::diagonal(std::span<const double> diag) {
    QuatMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = Quaternion(diag[i]);
    return m;
}

QuatMatrix& QuatMatrix::operator+=(const QuatMatrix& o) {
    require_same_size(n_, o.n_, "QuatMatrix +");
    for (std::size_t p = 0; p < entries_.size(); ++p) entries_[p] += o.entries_[p];
    return *this;
}

QuatMatrix& QuatMatrix::operator-=(const QuatMatrix& o) {
    require_same_size(n_, o.n_, "QuatMatrix -");
    for (std::size_t p = 0; p < entries_.size(); ++p) entries_[p] -= o.entries_[p];
    return *this;
}

QuatMatrix& QuatMatrix::operator*=(double s) {
    for (auto& q : entries_) q = s * q;
    return *this;
}

QuatMatrix operator+(QuatMatrix a, const QuatMatrix& b) { return a += b; }
QuatMatrix operator-(QuatMatrix a, const QuatMatrix& b) { return a -= b; }
QuatMatrix operator*(double s, QuatMatrix a) { return a *= s; }

QuatMatrix operator*(const QuatMatrix& a, const QuatMatrix& b) {
    require_same_size(a.size(), b.size(), "QuatMatrix *");
    const std::size_t n = a.size();
    QuatMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Quaternion acc;
            for (std::size_t l = 0; l < n; ++l) acc += a(i, l) * b(l, j);
            c(i, j) = acc;
        }
    }
    return c;
}

QuatVector operator*(const QuatMatrix& a, const QuatVector& v) {
    require_same_size(a.size(), v.size(), "QuatMatrix * vector");
    QuatVector out(v.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) out[i] += a(i, j) * v[j];
    }
    return out;
}

QuatMatrix conj_transpose(const QuatMatrix& c) {
    const std::size_t n = c.size();
    QuatMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out(i, j) = conj(c(j, i));
    }
    return out;
}

double hyperhermitian_residue(const QuatMatrix& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i; j < a.size(); ++j) worst = std::max(worst, abs(a(i, j) - conj(a(j, i))));
    }
    return worst;
}

bool is_hyperhermitian(const QuatMatrix& a, double tol) { return hyperhermitian_residue(a) <= tol; }

HyperHermitianMatrix::HyperHermitianMatrix(QuatMatrix m, double tol) : m_(std::move(m)) {
    const double residue = hyperhermitian_residue(m_);
    if (residue > tol) {
        std::ostringstream os;
        os << "matrix is not hyperhermitian (residue " << residue << ")";
        throw PreconditionError(os.str());
    }
    // Snap to exact symmetry so downstream sums see a real diagonal.
    *this = symmetrized(m_);
}

HyperHermitianMatrix::HyperHermitianMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows)
    : HyperHermitianMatrix(QuatMatrix(rows)) {}

HyperHermitianMatrix HyperHermitianMatrix::symmetrized(const QuatMatrix& m) {
    const std::size_t n = m.size();
    HyperHermitianMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.m_(i, i) = Quaternion(m(i, i).t);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Quaternion avg = 0.5 * (m(i, j) + conj(m(j, i)));
            out.m_(i, j) = avg;
            out.m_(j, i) = conj(avg);
        }
    }
    return out;
}

HyperHermitianMatrix HyperHermitianMatrix::identity(std::size_t n) {
    HyperHermitianMatrix out;
    out.m_ = QuatMatrix::identity(n);
    return out;
}

HyperHermitianMatrix HyperHermitianMatrix::diagonal(std::span<const double> diag) {
    HyperHermitianMatrix out;
    out.m_ = QuatMatrix::diagonal(diag);
    return out;
}

HyperHermitianMatrix& HyperHermitianMatrix::operator+=(const HyperHermitianMatrix& o) {
    m_ += o.m_;
    return *this;
}

HyperHermitianMatrix& HyperHermitianMatrix::operator-=(const HyperHermitianMatrix& o) {
    m_ -= o.m_;
    return *this;
}

HyperHermitianMatrix& HyperHermitianMatrix::operator*=(double s) {
    m_ *= s;
    return *this;
}

HyperHermitianMatrix operator+(HyperHermitianMatrix a, const HyperHermitianMatrix& b) { return a += b; }
HyperHermitianMatrix operator-(HyperHermitianMatrix a, const HyperHermitianMatrix& b) { return a -= b; }
HyperHermitianMatrix operator*(double s, HyperHermitianMatrix a) { return a *= s; }

HyperHermitianMatrix congruence(const HyperHermitianMatrix& a, const QuatMatrix& c) {
    require_same_size(a.size(), c.size(), "congruence");
    const QuatMatrix product = conj_transpose(c) * a.matrix() * c;
    // Rounding leaves O(eps) asymmetry; the exact result is hyperhermitian.
    return HyperHermitianMatrix::symmetrized(product);
}

HyperHermitianMatrix leading_minor(const HyperHermitianMatrix& a, std::size_t k) {
    if (k > a.size()) throw DimensionError("leading_minor: k exceeds dimension");
    QuatMatrix m(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) m(i, j) = a(i, j);
    }
    return HyperHermitianMatrix::symmetrized(m);
}

std::vector<Cycle> canonical_cycles(std::span<const int> sigma) {
    const std::size_t n = sigma.size();
    std::vector<char> seen(n, 0);
    for (int image : sigma) {
        if (image < 0 || static_cast<std::size_t>(image) >= n || seen[image]) {
            throw PreconditionError("canonical_cycles: input is not a permutation");
        }
        seen[image] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<Cycle> cycles;
    // Scanning in increasing order meets every cycle at its minimum first.
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        Cycle cycle;
        for (int k = static_cast<int>(start); !seen[k]; k = sigma[k]) {
            seen[k] = 1;
            cycle.push_back(k);
        }
        cycles.push_back(std::move(cycle));
    }
    std::reverse(cycles.begin(), cycles.end());
    return cycles;
}

int permutation_sign(std::span<const int> sigma) {
    const auto cycles = canonical_cycles(sigma);
    return ((sigma.size() - cycles.size()) % 2 == 0) ? 1 : -1;
}

namespace {

// One term of the expansion for a fixed permutation.
Quaternion cycle_product(const QuatMatrix& a, const std::vector<Cycle>& cycles) {
    Quaternion term = Quaternion::one();
    for (const auto& cycle : cycles) {
        const std::size_t len = cycle.size();
        for (std::size_t p = 0; p < len; ++p) {
            term = term * a(cycle[p], cycle[(p + 1) % len]);
        }
    }
    return term;
}

}  // namespace

double moore_det_expansion(const HyperHermitianMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) return 1.0;
    Permutation sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    Quaternion sum;
    do {
        const auto cycles = canonical_cycles(sigma);
        const bool even = (n - cycles.size()) % 2 == 0;
        const Quaternion term = cycle_product(a.matrix(), cycles);
        if (even) {
            sum += term;
        } else {
            sum -= term;
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return checked_real(sum, "moore_det");
}

double moore_det(const HyperHermitianMatrix& a) {
    const std::size_t n = a.size();
    switch (n) {
        case 0:
            return 1.0;
        case 1:
            return a(0, 0).t;
        case 2:
            // Identity: a22 a11 (cycles (2)(1)); transposition: -a12 a21.
            return a(1, 1).t * a(0, 0).t - real_part(a(0, 1) * a(1, 0));
        default:
            break;
    }
    if (n <= kMooreExpansionCutoff) return moore_det_expansion(a);
    const auto ev = eigenvalues(a);
    return std::accumulate(ev.begin(), ev.end(), 1.0, std::multiplies<>());
}

Eigen::MatrixXcd complex_adjoint(const QuatMatrix& a) {
    const Eigen::Index n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXcd out(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Quaternion& q = a(i, j);
            const std::complex<double> alpha(q.t, q.x);
            const std::complex<double> beta(q.y, q.z);
            out(i, j) = alpha;
            out(i, j + n) = beta;
            out(i + n, j) = -std::conj(beta);
            out(i + n, j + n) = std::conj(alpha);
        }
    }
    return out;
}

std::vector<double> eigenvalues(const HyperHermitianMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) return {};
    if (n == 1) return {a(0, 0).t};
    if (n == 2) {
        const double mean = 0.5 * (a(0, 0).t + a(1, 1).t);
        const double half_gap = 0.5 * (a(0, 0).t - a(1, 1).t);
        const double radius = std::sqrt(half_gap * half_gap + norm_sq(a(0, 1)));
        return {mean - radius, mean + radius};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(complex_adjoint(a.matrix()), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("eigenvalues: complex adjoint eigensolver failed");
    const Eigen::VectorXd& spectrum = solver.eigenvalues();  // ascending
    const double scale = 1.0 + spectrum.cwiseAbs().maxCoeff();
    std::vector<double> out(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double lo = spectrum(2 * p);
        const double hi = spectrum(2 * p + 1);
        if (hi - lo > kEigenPairTol * scale) {
            std::ostringstream os;
            os << "eigenvalues: complex adjoint pair " << p << " split by " << (hi - lo);
            throw ImaginaryResidueError(os.str());
        }
        out[p] = 0.5 * (lo + hi);
    }
    return out;
}

double min_eigenvalue(const HyperHermitianMatrix& a) {
    if (a.size() == 0) throw DimensionError("min_eigenvalue: empty matrix");
    return eigenvalues(a).front();
}

bool is_positive_definite(const HyperHermitianMatrix& a) {
    for (std::size_t k = 1; k <= a.size(); ++k) {
        if (!(moore_det(leading_minor(a, k)) > kSylvesterBoundary)) return false;
    }
    return true;
}

double quadratic_form(const HyperHermitianMatrix& a, std::span<const Quaternion> xi) {
    require_same_size(a.size(), xi.size(), "quadratic_form");
    Quaternion sum;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) sum += conj(xi[i]) * a(i, j) * xi[j];
    }
    return checked_real(sum, "quadratic_form");
}

}  // namespace hyperma
