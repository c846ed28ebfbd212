#include "hyperma/mixed_discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace hyperma {

namespace {

constexpr double kIdentityTol = 1e-9;

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

double binomial(std::size_t n, std::size_t k) {
    double b = 1.0;
    for (std::size_t p = 1; p <= k; ++p) b = b * static_cast<double>(n - k + p) / static_cast<double>(p);
    return b;
}

bool lexicographic_less(const HyperHermitianMatrix& a, const HyperHermitianMatrix& b) {
    const auto da = a.matrix().data();
    const auto db = b.matrix().data();
    return std::lexicographical_compare(da.begin(), da.end(), db.begin(), db.end(),
                                        [](const Quaternion& p, const Quaternion& q) {
                                            return p.components() < q.components();
                                        });
}

void require_dimension(const HyperHermitianMatrix& m, std::size_t n, const char* what) {
    if (m.size() != n) {
        std::ostringstream os;
        os << what << ": matrix of dimension " << m.size() << " where " << n << " was expected";
        throw DimensionError(os.str());
    }
}

void require_positive_definite(std::span<const HyperHermitianMatrix> mats, const char* what) {
    for (std::size_t p = 0; p < mats.size(); ++p) {
        if (!is_positive_definite(mats[p])) {
            std::ostringstream os;
            os << what << ": argument " << p << " is not positive definite";
            throw NotPositiveDefiniteError(os.str());
        }
    }
}

}  // namespace

double mixed_discriminant(std::span<const HyperHermitianMatrix> mats) {
    if (mats.empty()) throw DimensionError("mixed_discriminant: empty argument list");
    const std::size_t n = mats.front().size();
    if (mats.size() != n) {
        std::ostringstream os;
        os << "mixed_discriminant: " << mats.size() << " matrices given for dimension " << n;
        throw DimensionError(os.str());
    }
    for (const auto& m : mats) require_dimension(m, n, "mixed_discriminant");

    MatrixList sorted(mats.begin(), mats.end());
    std::stable_sort(sorted.begin(), sorted.end(), lexicographic_less);

    double sum = 0.0;
    const std::size_t subsets = std::size_t{1} << n;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        HyperHermitianMatrix partial = HyperHermitianMatrix::zero(n);
        std::size_t members = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                partial += sorted[i];
                ++members;
            }
        }
        const double d = moore_det(partial);
        sum += ((n - members) % 2 == 0) ? d : -d;
    }
    return sum / factorial(n);
}

double mixed_with_repeats(const HyperHermitianMatrix& x, const HyperHermitianMatrix& a, std::size_t k) {
    const std::size_t n = a.size();
    require_dimension(x, n, "mixed_with_repeats");
    if (n == 0 || k != n - 1) throw DimensionError("mixed_with_repeats: repeat count must be n - 1");
    if (n == 1) return x(0, 0).t;
    if (n == 2) return 0.5 * (moore_det(x + a) - moore_det(x) - moore_det(a));

    // Subsets of {X, A, ..., A} grouped by how many copies of A they hold.
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double jd = static_cast<double>(j);
        const double term = moore_det(x + jd * a) - moore_det(jd * a);
        const double weight = binomial(n - 1, j);
        sum += ((n - 1 - j) % 2 == 0) ? weight * term : -weight * term;
    }
    return sum / factorial(n);
}

double residual_scale(double lhs, double rhs) { return 1.0 + std::max(std::abs(lhs), std::abs(rhs)); }

AleksandrovResult aleksandrov_check(std::span<const HyperHermitianMatrix> mats, const HyperHermitianMatrix& x) {
    const std::size_t n = x.size();
    if (n < 2 || mats.size() != n - 1) throw DimensionError("aleksandrov_check: expects n - 1 matrices, n >= 2");
    for (const auto& m : mats) require_dimension(m, n, "aleksandrov_check");
    require_positive_definite(mats, "aleksandrov_check");

    MatrixList with_x(mats.begin(), mats.end());
    with_x.push_back(x);
    MatrixList with_last(mats.begin(), mats.end());
    with_last.push_back(mats.back());
    MatrixList with_xx(mats.begin(), mats.end() - 1);
    with_xx.push_back(x);
    with_xx.push_back(x);

    AleksandrovResult r;
    const double mixed = mixed_discriminant(with_x);
    r.lhs = mixed * mixed;
    r.rhs = mixed_discriminant(with_last) * mixed_discriminant(with_xx);
    r.holds = r.lhs >= r.rhs - kIdentityTol * residual_scale(r.lhs, r.rhs);
    return r;
}

std::vector<HyperHermitianMatrix> hyperhermitian_basis(std::size_t n) {
    std::vector<HyperHermitianMatrix> basis;
    basis.reserve(2 * n * n - n);
    for (std::size_t i = 0; i < n; ++i) {
        QuatMatrix m(n);
        m(i, i) = Quaternion::one();
        basis.emplace_back(m);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (int a = 0; a < 4; ++a) {
                QuatMatrix m(n);
                m(i, j) = Quaternion::unit(a);
                m(j, i) = conj(Quaternion::unit(a));
                basis.emplace_back(m);
            }
        }
    }
    return basis;
}

Signature signature_of_B(std::span<const HyperHermitianMatrix> mats, std::size_t n) {
    if (n < 2 || mats.size() != n - 2) throw DimensionError("signature_of_B: expects n - 2 matrices, n >= 2");
    for (const auto& m : mats) require_dimension(m, n, "signature_of_B");
    require_positive_definite(mats, "signature_of_B");

    const auto basis = hyperhermitian_basis(n);
    const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd gram(dim, dim);
    MatrixList args(mats.begin(), mats.end());
    args.resize(n);
    for (Eigen::Index p = 0; p < dim; ++p) {
        for (Eigen::Index q = p; q < dim; ++q) {
            args[n - 2] = basis[p];
            args[n - 1] = basis[q];
            gram(p, q) = gram(q, p) = mixed_discriminant(args);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    const double cutoff = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());

    Signature s;
    s.gram_eigenvalues.assign(ev.data(), ev.data() + ev.size());
    for (double lambda : s.gram_eigenvalues) {
        if (lambda > cutoff) {
            ++s.plus;
        } else if (lambda < -cutoff) {
            ++s.minus;
        } else {
            ++s.zero;
        }
    }
    return s;
}

QuatMatrix claim214_matrix(std::span<const Quaternion> a, const HyperHermitianMatrix& u, ClaimProductOrder order) {
    const std::size_t n = u.size();
    if (a.size() != n || n == 0) throw DimensionError("claim214: vector length must equal matrix dimension");
    QuatMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Quaternion& column = u(i, n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            switch (order) {
                case ClaimProductOrder::column_times_conj: m(i, j) = column * conj(a[j]); break;
                case ClaimProductOrder::column_times_plain: m(i, j) = column * a[j]; break;
                case ClaimProductOrder::conj_times_column: m(i, j) = conj(a[j]) * column; break;
                case ClaimProductOrder::plain_times_column: m(i, j) = a[j] * column; break;
            }
        }
    }
    return m;
}

Claim214Result claim214_check(std::span<const Quaternion> a, const HyperHermitianMatrix& u, ClaimProductOrder order) {
    const std::size_t n = u.size();
    const QuatMatrix m = claim214_matrix(a, u, order);
    const auto sym = HyperHermitianMatrix::symmetrized(m + conj_transpose(m));

    Claim214Result r;
    r.lhs = mixed_with_repeats(sym, u, n - 1);
    r.rhs = 2.0 * real_part(conj(a[n - 1])) * moore_det(u);
    r.normalized_lhs = static_cast<double>(n) * r.lhs;
    r.scale = residual_scale(r.lhs, r.rhs);
    r.holds = std::abs(r.lhs - r.rhs) <= kIdentityTol * r.scale;
    r.holds_normalized =
        std::abs(r.normalized_lhs - r.rhs) <= kIdentityTol * residual_scale(r.normalized_lhs, r.rhs);
    return r;
}

Cor217Result cor217_check(const QuatMatrix& x, const QuatMatrix& y, const HyperHermitianMatrix& a, double eps) {
    const std::size_t n = a.size();
    if (x.size() != n || y.size() != n) throw DimensionError("cor217_check: dimension mismatch");
    if (!(eps > 0.0)) throw PreconditionError("cor217_check: eps must be positive");
    if (!is_positive_definite(a)) throw NotPositiveDefiniteError("cor217_check: A is not positive definite");

    const QuatMatrix xs = conj_transpose(x);
    const QuatMatrix ys = conj_transpose(y);
    const auto cross = HyperHermitianMatrix::symmetrized(x * ys + y * xs);
    const auto xx = HyperHermitianMatrix::symmetrized(x * xs);
    const auto yy = HyperHermitianMatrix::symmetrized(y * ys);

    Cor217Result r;
    r.lhs = std::abs(mixed_with_repeats(cross, a, n - 1));
    r.bound = eps * eps * mixed_with_repeats(xx, a, n - 1) + mixed_with_repeats(yy, a, n - 1) / (eps * eps);
    r.holds = r.lhs <= r.bound + kIdentityTol * residual_scale(r.lhs, r.bound);
    return r;
}

}  // namespace hyperma
