#pragma once

// Closed-form real functions on H^n with exact value, gradient and real
// Hessian. A TestFunction is a sum of terms; points are stacked real
// coordinates x[4 i + a] = a-th component of q_i.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hyperma/quat_matrix.hpp"

namespace hyperma {

using Point = std::vector<double>;

enum class TestKind {
    constant,        // c
    affine,          // w . x
    abs_sq,          // |q - c|^2
    radial_pow4,     // |q - c|^4
    exp_abs_sq,      // exp(lambda |q - c|^2)
    quadratic_form,  // (q - c)* A (q - c)
};

std::string to_string(TestKind kind);
TestKind test_kind_from_string(const std::string& name);

struct TestTerm {
    TestKind kind = TestKind::constant;
    double scale = 1.0;
    Point center;                       // empty means the origin
    double lambda = 1.0;                // exp_abs_sq rate
    std::vector<double> coeffs;         // affine weights, length 4n
    HyperHermitianMatrix form;          // quadratic_form matrix
};

class TestFunction {
public:
    TestFunction() = default;
    TestFunction(std::size_t n, std::vector<TestTerm> terms);

    static TestFunction constant(std::size_t n, double c);
    static TestFunction affine(std::span<const double> coeffs, double c = 0.0);
    // t-coordinate of q_{var} (0-based).
    static TestFunction coordinate(std::size_t n, std::size_t var, int component = 0);
    static TestFunction abs_sq(std::size_t n, double scale = 1.0);
    static TestFunction radial_pow4(std::size_t n, double scale = 1.0);
    static TestFunction exp_abs_sq(std::size_t n, double lambda, double scale = 1.0);
    static TestFunction quadratic_form(const HyperHermitianMatrix& a, double scale = 1.0);

    std::size_t n() const { return n_; }
    std::size_t dim() const { return 4 * n_; }
    const std::vector<TestTerm>& terms() const { return terms_; }

    double value(std::span<const double> x) const;
    Eigen::VectorXd gradient(std::span<const double> x) const;
    Eigen::MatrixXd real_hessian(std::span<const double> x) const;

    // Moves every centered term (and affine terms) to be centered at c.
    TestFunction shifted(std::span<const double> c) const;

    TestFunction& operator+=(const TestFunction& o);
    TestFunction& operator*=(double s);

private:
    std::size_t n_ = 0;
    std::vector<TestTerm> terms_;
};

TestFunction operator+(TestFunction a, const TestFunction& b);
TestFunction operator*(double s, TestFunction a);

// Symmetric S with (q* A q) = x^T S x.
Eigen::MatrixXd quadratic_form_real_matrix(const HyperHermitianMatrix& a);

}  // namespace hyperma
