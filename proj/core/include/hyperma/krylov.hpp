#pragma once

// Matrix-free Krylov solvers. Inner products are accumulated serially in
// index order so results do not depend on the thread count.

#include <cstddef>
#include <functional>
#include <vector>

namespace hyperma {

using Vec = std::vector<double>;
using LinearMap = std::function<void(const Vec& in, Vec& out)>;

struct KrylovSettings {
    std::size_t restart = 100;
    std::size_t max_iterations = 2000;
    double rel_tol = 1e-11;  // on ||b - A x|| / ||b||
    double abs_tol = 1e-14;
};

struct KrylovResult {
    std::size_t iterations = 0;
    double residual = 0.0;  // final ||b - A x||
    bool converged = false;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);

// Restarted GMRES with right preconditioning (identity when precond is empty).
// x holds the initial guess on entry.
KrylovResult gmres(const LinearMap& a, const Vec& b, Vec& x, const KrylovSettings& settings,
                   const LinearMap& precond = {});

// Conjugate gradients for symmetric positive definite maps.
KrylovResult conjugate_gradient(const LinearMap& a, const Vec& b, Vec& x, const KrylovSettings& settings);

}  // namespace hyperma
