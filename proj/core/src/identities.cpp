#include "hyperma/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Dense>

#include "hyperma/errors.hpp"
#include "hyperma/mixed_discriminant.hpp"
#include "hyperma/quat_matrix.hpp"
#include "hyperma/random.hpp"

namespace hyperma {

namespace {

constexpr std::size_t kSignatureCases = 5;
constexpr std::size_t kSymmetryMaxN = 5;
constexpr double kSylvesterBand = 1e-8;

double scaled_gap(double a, double b) { return std::abs(a - b) / residual_scale(a, b); }

// Ordinary determinant of the complex matrix t + x i.
double complex_det(const HyperHermitianMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {a(i, j).t, a(i, j).x};
    return m.partialPivLu().determinant().real();
}

MatrixList random_pd_list(std::size_t count, std::size_t n, Rng& rng) {
    MatrixList out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_positive_definite(n, rng));
    return out;
}

class Runner {
public:
    Runner(IdentityReport& report, std::uint64_t seed) : report_(report), seed_(seed) {}

    // body(rng, check) records one case.
    void run(const std::string& name, double tol, std::size_t cases,
             const std::function<void(Rng&, IdentityCheck&)>& body, bool counted = true) {
        IdentityCheck c;
        c.name = name;
        c.tolerance = tol;
        c.counted = counted;
        const auto stream = static_cast<std::uint64_t>(report_.checks.size());
        for (std::size_t i = 0; i < cases; ++i) {
            Rng rng = sample_rng(seed_, stream, i);
            body(rng, c);
        }
        report_.checks.push_back(std::move(c));
    }

    static void record(IdentityCheck& c, double residual) {
        ++c.cases;
        c.worst = std::max(c.worst, residual);
        if (!(residual <= c.tolerance)) ++c.failures;
    }

    static void record(IdentityCheck& c, bool ok) {
        ++c.cases;
        if (!ok) ++c.failures;
    }

private:
    IdentityReport& report_;
    std::uint64_t seed_;
};

}  // namespace

std::size_t IdentityReport::failures() const {
    std::size_t total = 0;
    for (const auto& c : checks) {
        if (c.counted) total += c.failures;
    }
    return total;
}

IdentityReport check_identities(std::size_t n, std::size_t samples, std::uint64_t seed) {
    if (n == 0) throw DimensionError("check_identities: n must be positive");
    if (samples == 0) throw PreconditionError("check_identities: samples must be positive");
    IdentityReport report;
    report.n = n;
    report.samples = samples;
    report.seed = seed;
    Runner run(report, seed);

    run.run("moore_det_complex_hermitian", 1e-10, samples, [&](Rng& rng, IdentityCheck& c) {
        const auto a = random_complex_hermitian(n, rng);
        Runner::record(c, scaled_gap(moore_det(a), complex_det(a)));
    });

    run.run("moore_det_congruence", 1e-9, samples, [&](Rng& rng, IdentityCheck& c) {
        const auto a = random_hyperhermitian(n, rng);
        const auto m = random_quat_matrix(n, rng);
        const double lhs = moore_det(congruence(a, m));
        const double rhs = moore_det(a) * moore_det(HyperHermitianMatrix::symmetrized(conj_transpose(m) * m));
        Runner::record(c, scaled_gap(lhs, rhs));
    });

    run.run("sylvester_vs_eigenvalues", 0.0, samples, [&](Rng& rng, IdentityCheck& c) {
        auto a = random_hyperhermitian(n, rng);
        a += uniform(rng, 0.0, 2.5) * HyperHermitianMatrix::identity(n);
        const double lambda = min_eigenvalue(a);
        if (std::abs(lambda) <= kSylvesterBand) return;  // tie band
        Runner::record(c, is_positive_definite(a) == (lambda > 0.0));
    });

    if (n <= kSymmetryMaxN) {
        run.run("mixed_symmetry", 0.0, samples, [&](Rng& rng, IdentityCheck& c) {
            MatrixList mats;
            for (std::size_t i = 0; i < n; ++i) mats.push_back(random_hyperhermitian(n, rng));
            const double ref = mixed_discriminant(mats);
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            bool ok = true;
            while (std::next_permutation(perm.begin(), perm.end())) {
                MatrixList permuted;
                for (std::size_t i : perm) permuted.push_back(mats[i]);
                if (mixed_discriminant(permuted) != ref) ok = false;
            }
            Runner::record(c, ok);
        });
    }

    run.run("mixed_linearity", 1e-10, samples, [&](Rng& rng, IdentityCheck& c) {
        MatrixList mats;
        for (std::size_t i = 0; i < n; ++i) mats.push_back(random_hyperhermitian(n, rng));
        const auto y = random_hyperhermitian(n, rng);
        const double a = uniform(rng, -2.0, 2.0);
        const double b = uniform(rng, -2.0, 2.0);
        const std::size_t slot = static_cast<std::size_t>(rng() % n);
        const double dx = mixed_discriminant(mats);
        MatrixList with_y = mats;
        with_y[slot] = y;
        const double dy = mixed_discriminant(with_y);
        MatrixList combined = mats;
        combined[slot] = a * mats[slot] + b * y;
        Runner::record(c, scaled_gap(mixed_discriminant(combined), a * dx + b * dy));
    });

    run.run("mixed_diagonal_is_det", 1e-10, samples, [&](Rng& rng, IdentityCheck& c) {
        const auto a = random_hyperhermitian(n, rng);
        Runner::record(c, scaled_gap(mixed_discriminant(MatrixList(n, a)), moore_det(a)));
    });

    run.run("mixed_positive_on_pd", 0.0, samples, [&](Rng& rng, IdentityCheck& c) {
        Runner::record(c, mixed_discriminant(random_pd_list(n, n, rng)) > 0.0);
    });

    if (n >= 2) {
        run.run("aleksandrov_inequality", 0.0, samples, [&](Rng& rng, IdentityCheck& c) {
            const auto mats = random_pd_list(n - 1, n, rng);
            Runner::record(c, aleksandrov_check(mats, random_hyperhermitian(n, rng)).holds);
        });
        run.run("aleksandrov_equality_branch", 1e-9, samples, [&](Rng& rng, IdentityCheck& c) {
            const auto mats = random_pd_list(n - 1, n, rng);
            const auto r = aleksandrov_check(mats, mats.back());
            Runner::record(c, scaled_gap(r.lhs, r.rhs));
        });
        run.run("signature_of_B", 0.0, std::min(samples, kSignatureCases), [&](Rng& rng, IdentityCheck& c) {
            const auto s = signature_of_B(random_pd_list(n - 2, n, rng), n);
            Runner::record(c, s.plus == 1 && s.minus == 2 * n * n - n - 1 && s.zero == 0);
        });
    }

    // The claim's left side as printed is 1/n of the directional derivative;
    // the normalized form is the identity that holds.
    run.run("claim214_normalized", 1e-9, samples, [&](Rng& rng, IdentityCheck& c) {
        const auto a = random_quat_vector(n, rng);
        const auto r = claim214_check(a, random_positive_definite(n, rng));
        Runner::record(c, scaled_gap(r.normalized_lhs, r.rhs));
    });
    run.run(
        "claim214_literal", 1e-9, samples,
        [&](Rng& rng, IdentityCheck& c) {
            const auto a = random_quat_vector(n, rng);
            const auto r = claim214_check(a, random_positive_definite(n, rng));
            Runner::record(c, scaled_gap(r.lhs, r.rhs));
        },
        n == 1);

    run.run("cor217_inequality", 0.0, samples, [&](Rng& rng, IdentityCheck& c) {
        const auto x = random_quat_matrix(n, rng);
        const auto y = random_quat_matrix(n, rng);
        const double eps = std::exp(uniform(rng, -2.0, 2.0));
        Runner::record(c, cor217_check(x, y, random_positive_definite(n, rng), eps).holds);
    });
    return report;
}

}  // namespace hyperma
