#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "hyperma/mixed_discriminant.hpp"
#include "hyperma/random.hpp"

using namespace hyperma;

namespace {

double rel_gap(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

HyperHermitianMatrix diag(std::initializer_list<double> d) {
    const std::vector<double> v(d);
    return HyperHermitianMatrix::diagonal(v);
}

}  // namespace

TEST_CASE("mixed_discriminant examples") {
    auto rng = sample_rng(41, 0, 0);
    const auto a = random_hyperhermitian(2, rng);
    const std::vector<HyperHermitianMatrix> twice{a, a};
    CHECK(rel_gap(mixed_discriminant(twice), moore_det(a)) <= 1e-14);

    for (std::size_t n = 1; n <= 4; ++n) {
        const MatrixList ids(n, HyperHermitianMatrix::identity(n));
        CHECK(mixed_discriminant(ids) == doctest::Approx(1.0).epsilon(1e-14));
    }

    // det(l A + m B) = (l + 3m)(2l + 4m): lm coefficient 4 + 6 = 10, halved.
    const std::vector<HyperHermitianMatrix> ab{diag({1, 2}), diag({3, 4})};
    CHECK(mixed_discriminant(ab) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("mixed_discriminant argument validation") {
    const MatrixList wrong_count(3, HyperHermitianMatrix::identity(2));
    CHECK_THROWS_AS(mixed_discriminant(wrong_count), DimensionError);
    const MatrixList mixed_dims{HyperHermitianMatrix::identity(2), HyperHermitianMatrix::identity(3)};
    CHECK_THROWS_AS(mixed_discriminant(mixed_dims), DimensionError);
    CHECK_THROWS_AS(mixed_discriminant(MatrixList{}), DimensionError);
}

TEST_CASE("det(A, ..., A) = det A") {
    auto rng = sample_rng(42, 0, 0);
    for (int s = 0; s < 200; ++s) {
        const std::size_t n = 1 + s % 4;
        const auto a = random_hyperhermitian(n, rng);
        const MatrixList copies(n, a);
        CHECK(rel_gap(mixed_discriminant(copies), moore_det(a)) <= 1e-10);
        CHECK(rel_gap(mixed_with_repeats(a, a, n - 1), moore_det(a)) <= 1e-10);
    }
}

TEST_CASE("mixed_discriminant is exactly symmetric") {
    auto rng = sample_rng(43, 0, 0);
    for (int s = 0; s < 50; ++s) {
        MatrixList mats{random_hyperhermitian(3, rng), random_hyperhermitian(3, rng), random_hyperhermitian(3, rng)};
        const double reference = mixed_discriminant(mats);
        std::array<int, 3> order{0, 1, 2};
        do {
            const MatrixList permuted{mats[order[0]], mats[order[1]], mats[order[2]]};
            CHECK(mixed_discriminant(permuted) == reference);
        } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST_CASE("mixed_discriminant is linear in each slot") {
    auto rng = sample_rng(44, 0, 0);
    for (int s = 0; s < 200; ++s) {
        const std::size_t n = 2 + s % 3;
        MatrixList rest;
        for (std::size_t p = 1; p < n; ++p) rest.push_back(random_hyperhermitian(n, rng));
        const auto a1 = random_hyperhermitian(n, rng);
        const auto a2 = random_hyperhermitian(n, rng);
        const double lambda = uniform(rng, -2, 2);
        const double mu = uniform(rng, -2, 2);
        const std::size_t slot = s % n;

        auto with = [&](const HyperHermitianMatrix& m) {
            MatrixList args = rest;
            args.insert(args.begin() + static_cast<std::ptrdiff_t>(slot), m);
            return mixed_discriminant(args);
        };
        const double lhs = with(lambda * a1 + mu * a2);
        const double rhs = lambda * with(a1) + mu * with(a2);
        CHECK(rel_gap(lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("polarization: det(sum l_i A_i) expands into mixed discriminants") {
    auto rng = sample_rng(45, 0, 0);
    for (int s = 0; s < 100; ++s) {
        const auto a = random_hyperhermitian(2, rng);
        const auto b = random_hyperhermitian(2, rng);
        const double l = uniform(rng, -2, 2);
        const double m = uniform(rng, -2, 2);
        const MatrixList ab{a, b};
        const double expansion = l * l * moore_det(a) + 2 * l * m * mixed_discriminant(ab) + m * m * moore_det(b);
        CHECK(rel_gap(moore_det(l * a + m * b), expansion) <= 1e-9);
    }
    // n = 3 with the multinomial weights 3!/alpha!.
    for (int s = 0; s < 50; ++s) {
        const MatrixList a{random_hyperhermitian(3, rng), random_hyperhermitian(3, rng), random_hyperhermitian(3, rng)};
        const std::array<double, 3> l{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
        double expansion = 0.0;
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) {
                for (int r = 0; r < 3; ++r) {
                    const MatrixList args{a[p], a[q], a[r]};
                    expansion += l[p] * l[q] * l[r] * mixed_discriminant(args);
                }
            }
        }
        const auto combined = l[0] * a[0] + l[1] * a[1] + l[2] * a[2];
        CHECK(rel_gap(moore_det(combined), expansion) <= 1e-9);
    }
}

TEST_CASE("mixed_with_repeats") {
    // (1/n) sum_i prod_{j != i} a_j
    const auto d = diag({2, 3, 5});
    const double expected = (3.0 * 5 + 2.0 * 5 + 2.0 * 3) / 3.0;
    CHECK(mixed_with_repeats(HyperHermitianMatrix::identity(3), d, 2) == doctest::Approx(expected).epsilon(1e-14));
    const auto d4 = diag({1, 2, 3, 4});
    const double expected4 = (24.0 / 1 + 24.0 / 2 + 24.0 / 3 + 24.0 / 4) / 4.0;
    CHECK(mixed_with_repeats(HyperHermitianMatrix::identity(4), d4, 3) == doctest::Approx(expected4).epsilon(1e-13));

    CHECK_THROWS_AS(mixed_with_repeats(d, d, 1), DimensionError);
    CHECK_THROWS_AS(mixed_with_repeats(HyperHermitianMatrix::identity(2), d, 2), DimensionError);

    auto rng = sample_rng(46, 0, 0);
    for (int s = 0; s < 200; ++s) {
        const std::size_t n = 1 + s % 4;
        const auto x = random_hyperhermitian(n, rng);
        const auto y = random_hyperhermitian(n, rng);
        const auto a = random_hyperhermitian(n, rng);
        MatrixList args(n, a);
        args[0] = x;
        CHECK(rel_gap(mixed_with_repeats(x, a, n - 1), mixed_discriminant(args)) <= 1e-10);
        const double lhs = mixed_with_repeats(2.0 * x + y, a, n - 1);
        const double rhs = 2.0 * mixed_with_repeats(x, a, n - 1) + mixed_with_repeats(y, a, n - 1);
        CHECK(rel_gap(lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("mixed discriminants of definite matrices") {
    auto rng = sample_rng(47, 0, 0);
    for (int s = 0; s < 500; ++s) {
        const std::size_t n = 1 + s % 4;
        MatrixList pd;
        MatrixList psd;
        for (std::size_t p = 0; p < n; ++p) {
            pd.push_back(random_positive_definite(n, rng, 0.0));
            psd.push_back(random_nonnegative(n, rng, p == 0));
        }
        CHECK(mixed_discriminant(pd) > 0.0);
        CHECK(mixed_discriminant(psd) >= -1e-12);
    }
}

TEST_CASE("aleksandrov_check") {
    for (std::size_t n = 2; n <= 4; ++n) {
        const MatrixList ids(n - 1, HyperHermitianMatrix::identity(n));
        const auto r = aleksandrov_check(ids, HyperHermitianMatrix::identity(n));
        CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(r.rhs == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(r.holds);
    }

    auto rng = sample_rng(48, 0, 0);
    for (int s = 0; s < 500; ++s) {
        const std::size_t n = 2 + s % 2;
        MatrixList as;
        for (std::size_t p = 0; p + 1 < n; ++p) as.push_back(random_positive_definite(n, rng));
        const auto r = aleksandrov_check(as, random_hyperhermitian(n, rng));
        CHECK(r.holds);

        // Equality exactly when X is proportional to A_{n-1}.
        const double c = uniform(rng, -3, 3);
        const auto eq = aleksandrov_check(as, c * as.back());
        CHECK(std::abs(eq.lhs - eq.rhs) <= 1e-9 * residual_scale(eq.lhs, eq.rhs));
    }

    const MatrixList not_pd{diag({1, -1})};
    CHECK_THROWS_AS(aleksandrov_check(not_pd, HyperHermitianMatrix::identity(2)), NotPositiveDefiniteError);
    CHECK_THROWS_AS(aleksandrov_check(MatrixList{}, HyperHermitianMatrix::identity(2)), DimensionError);
}

TEST_CASE("hyperhermitian basis") {
    for (std::size_t n = 1; n <= 4; ++n) CHECK(hyperhermitian_basis(n).size() == 2 * n * n - n);
}

TEST_CASE("signature_of_B") {
    const auto s2 = signature_of_B(MatrixList{}, 2);
    CHECK(s2.plus == 1);
    CHECK(s2.minus == 5);
    CHECK(s2.zero == 0);

    const MatrixList id3{HyperHermitianMatrix::identity(3)};
    const auto s3 = signature_of_B(id3, 3);
    CHECK(s3.plus == 1);
    CHECK(s3.minus == 14);
    CHECK(s3.zero == 0);

    const MatrixList doubled{2.0 * HyperHermitianMatrix::identity(3)};
    const auto s3d = signature_of_B(doubled, 3);
    CHECK(s3d.plus == s3.plus);
    CHECK(s3d.minus == s3.minus);

    auto rng = sample_rng(49, 0, 0);
    for (int s = 0; s < 10; ++s) {
        const MatrixList a3{random_positive_definite(3, rng)};
        const auto sig = signature_of_B(a3, 3);
        CHECK(sig.plus == 1);
        CHECK(sig.minus == 14);
        const MatrixList a4{random_positive_definite(4, rng), random_positive_definite(4, rng)};
        const auto sig4 = signature_of_B(a4, 4);
        CHECK(sig4.plus == 1);
        CHECK(sig4.minus == 27);
    }

    const MatrixList not_pd{diag({1, -1, 1})};
    CHECK_THROWS_AS(signature_of_B(not_pd, 3), NotPositiveDefiniteError);
}

TEST_CASE("claim 2.14: the product order is fixed by random inputs") {
    auto rng = sample_rng(50, 0, 0);
    std::array<int, 4> normalized_failures{};
    for (int s = 0; s < 200; ++s) {
        const std::size_t n = 2 + s % 2;
        const auto u = random_positive_definite(n, rng);
        const auto a = random_quat_vector(n, rng);
        for (int o = 0; o < 4; ++o) {
            const auto r = claim214_check(a, u, static_cast<ClaimProductOrder>(o));
            if (!r.holds_normalized) ++normalized_failures[o];
        }
    }
    CHECK(normalized_failures[static_cast<int>(ClaimProductOrder::column_times_conj)] == 0);
    CHECK(normalized_failures[static_cast<int>(ClaimProductOrder::column_times_plain)] == 0);
    CHECK(normalized_failures[static_cast<int>(ClaimProductOrder::conj_times_column)] > 0);
    CHECK(normalized_failures[static_cast<int>(ClaimProductOrder::plain_times_column)] > 0);
}

TEST_CASE("claim 2.14: det(M + M*, U[n-1]) carries a factor 1/n") {
    auto rng = sample_rng(51, 0, 0);
    // n = 1: the identity holds as written.
    for (int s = 0; s < 50; ++s) {
        const auto u = random_positive_definite(1, rng);
        const auto a = random_quat_vector(1, rng);
        CHECK(claim214_check(a, u).holds);
    }
    for (std::size_t n = 2; n <= 3; ++n) {
        const auto u = random_positive_definite(n, rng);
        QuatVector e_n(n);
        e_n[n - 1] = Quaternion::one();
        const auto r = claim214_check(e_n, u);
        CHECK(r.rhs == doctest::Approx(2.0 * moore_det(u)).epsilon(1e-14));
        CHECK(r.normalized_lhs == doctest::Approx(r.rhs).epsilon(1e-10));
        CHECK(r.lhs == doctest::Approx(r.rhs / static_cast<double>(n)).epsilon(1e-10));

        auto imaginary = random_quat_vector(n, rng);
        imaginary[n - 1].t = 0.0;
        const auto ri = claim214_check(imaginary, u);
        CHECK(ri.rhs == 0.0);
        CHECK(std::abs(ri.lhs) <= 1e-12);
    }
    CHECK_THROWS_AS(claim214_check(QuatVector(2), HyperHermitianMatrix::identity(3)), DimensionError);
}

TEST_CASE("cor217_check") {
    auto rng = sample_rng(52, 0, 0);
    for (std::size_t n = 2; n <= 3; ++n) {
        const auto a = random_positive_definite(n, rng);
        const auto x = random_quat_matrix(n, rng);
        const auto same = cor217_check(x, x, a, 1.0);
        CHECK(same.lhs == doctest::Approx(same.bound).epsilon(1e-12));
        CHECK(same.holds);

        const auto zero = cor217_check(x, QuatMatrix(n), a, 0.5);
        CHECK(std::abs(zero.lhs) <= 1e-15);
        CHECK(zero.holds);
    }
    const std::array<double, 3> epsilons{0.5, 1.0, 2.0};
    for (int s = 0; s < 500; ++s) {
        const std::size_t n = 2 + s % 2;
        const auto r = cor217_check(random_quat_matrix(n, rng), random_quat_matrix(n, rng),
                                    random_positive_definite(n, rng), epsilons[s % 3]);
        CHECK(r.holds);
    }
    const auto a = HyperHermitianMatrix::identity(2);
    CHECK_THROWS_AS(cor217_check(QuatMatrix(2), QuatMatrix(2), a, 0.0), PreconditionError);
    CHECK_THROWS_AS(cor217_check(QuatMatrix(2), QuatMatrix(2), diag({1, -1}), 1.0), NotPositiveDefiniteError);
}
