#pragma once

// Finite-difference Newton solver for det(u_{i j-bar}) = f(q, u) with
// Dirichlet data, plus the comparison checks run on its output.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperma/domain.hpp"
#include "hyperma/grid.hpp"
#include "hyperma/krylov.hpp"
#include "hyperma/quat_matrix.hpp"
#include "hyperma/subsolution.hpp"

namespace hyperma {

enum class NodeKind : std::uint8_t { exterior, boundary, interior };

// Line of a second difference: steps of h (e_p + sign e_q), or h e_p when
// q == p. Only the lines the hyperhermitian Hessian depends on are kept:
// axes, and diagonals mixing two different quaternionic variables.
struct StencilDirection {
    std::size_t p = 0;
    std::size_t q = 0;
    int sign = 0;
    std::ptrdiff_t offset = 0;  // flat lattice offset of one step
};

// A stencil arm that leaves the domain: it ends on the boundary at fraction
// theta in (0, 1] of the step, at boundary_points[point].
struct CutArm {
    std::uint32_t direction = 0;
    std::int8_t side = 1;  // +1 forward, -1 backward
    double theta = 1.0;
    std::size_t point = 0;
};

// Ball and ellipsoid lattices are cell-centered (nodes at center + (m + 1/2) h);
// box lattices are vertex-aligned with nodes on the faces. Interior nodes are
// the lattice nodes strictly inside the domain. Second differences whose arm
// would leave the domain are shortened to the boundary crossing
// (Shortley-Weller weights), where the Dirichlet data is evaluated, so every
// second difference is exact on quadratics.
struct Discretization {
    Problem problem;
    GridFunction grid;  // phi at boundary nodes, 0 elsewhere
    std::vector<NodeKind> kind;
    std::vector<std::size_t> interior;
    std::vector<std::size_t> boundary;  // non-interior nodes reached by an interior stencil
    std::vector<std::size_t> slot;      // node -> position in `interior`, or npos
    double h = 0.0;

    std::vector<StencilDirection> directions;
    std::vector<Point> boundary_points;
    std::vector<double> boundary_values;  // phi at boundary_points
    std::vector<std::size_t> arm_start;   // CSR over interior slots, size interior + 1
    std::vector<CutArm> arms;

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
};

// Throws PreconditionError for an empty interior, gradient-dependent f, or
// (boxes) an h that does not divide the width.
Discretization discretize(const Problem& problem, double h);

// Lattice values (read at interior nodes) plus values at the boundary points.
struct DiscreteFunction {
    GridFunction nodes;
    std::vector<double> trace;
};

// fn at interior nodes and boundary points; phi at boundary nodes.
DiscreteFunction sample_on(const Discretization& disc, const std::function<double(std::span<const double>)>& fn);
// Interior values in `interior` order, trace = phi.
DiscreteFunction assemble(const Discretization& disc, const std::vector<double>& interior);
std::vector<double> interior_values(const Discretization& disc, const DiscreteFunction& u);

// Hyperhermitian Hessian at interior slot k.
HyperHermitianMatrix discrete_hessian(const DiscreteFunction& u, const Discretization& disc, std::size_t k);

struct SolveConfig {
    double tol = 1e-8;
    std::size_t max_newton = 50;
    double damping = 0.5;
    double spsh_floor = 1e-6;
    double min_step = 1e-10;  // backtracking gives up below this step length
    KrylovSettings krylov;

    void validate() const;
};

struct NonSpshNode {
    std::size_t node = 0;
    Point position;
    double min_eigenvalue = 0.0;
};

// G(u) at interior nodes (in `interior` order): log ma(u) - log f(q, u).
// Throws SolverError naming the node when a Hessian eigenvalue is below floor
// or the determinant is not positive.
std::vector<double> residual(const DiscreteFunction& u, const Discretization& disc, double spsh_floor = 0.0);
// Boundary rows u - phi at the boundary points.
std::vector<double> boundary_residual(const DiscreteFunction& u, const Discretization& disc);

// Interior node with the smallest Hessian eigenvalue, if that is below floor.
std::optional<NonSpshNode> find_non_spsh(const DiscreteFunction& u, const Discretization& disc, double floor);

enum class Normalization {
    exact,  // n det(Hv, Hu[n-1]) / det(Hu) - (f_u / f) v, the derivative of G
    rhs,    // n det(Hv, Hu[n-1]) / f - (f_u / f) v
};

// L v at interior nodes. Newton corrections have zero trace.
std::vector<double> linearized_apply(const DiscreteFunction& u, const DiscreteFunction& v, const Discretization& disc,
                                     Normalization normalization = Normalization::exact);

struct SolveReport {
    std::vector<double> residual_history;  // max |G| at the initial and every accepted iterate
    std::vector<double> step_lengths;
    std::vector<std::size_t> krylov_iterations;
    std::vector<double> krylov_residuals;
    std::vector<double> min_eigenvalues;  // smallest nodal eigenvalue per accepted iterate
    std::size_t newton_iterations = 0;
    double final_residual = 0.0;
    double boundary_residual = 0.0;
    bool converged = false;
    std::string failure;
    double wall_seconds = 0.0;
    std::size_t interior_nodes = 0;
    std::size_t boundary_points = 0;
    double h = 0.0;
    SolveConfig config;
    std::optional<double> max_error;  // vs the declared exact solution, over interior nodes
};

struct SolveResult {
    DiscreteFunction u;
    SolveReport report;
    Discretization disc;
    std::optional<BuildReport> subsolution;
};

// Newton iteration from `initial` (default: the subsolution sampled on the
// lattice). The trace is reset to phi. Does not throw on non-convergence;
// the report carries the failure and u holds the last accepted iterate.
SolveResult solve_dirichlet(const Problem& problem, double h, const SolveConfig& config = {},
                            std::optional<DiscreteFunction> initial = std::nullopt);
SolveResult solve_dirichlet(const Discretization& disc, const SolveConfig& config, const DiscreteFunction& initial);

// Sum of the axis second differences at interior nodes.
std::vector<double> discrete_laplacian(const DiscreteFunction& u, const Discretization& disc);

// Solves Lap_h w = rhs at interior nodes with trace phi. Cut arms make the
// operator nonsymmetric, so this uses Jacobi-preconditioned GMRES.
// Throws SolverError when the linear solve does not converge.
DiscreteFunction poisson_solve(const Discretization& disc, const std::vector<double>& rhs,
                               const KrylovSettings& settings = {});
DiscreteFunction harmonic_extension(const Discretization& disc, const KrylovSettings& settings = {});

// Slack C h^2 + 1e-8 used by the comparison checks.
inline constexpr double kComparisonSlackC = 1.0;
inline constexpr double kComparisonSlackAbs = 1e-8;
double comparison_slack(double h);

struct MinimumPrincipleReport {
    double interior_min = 0.0;  // min of u - v over interior nodes and boundary points
    double boundary_min = 0.0;  // min over boundary points
    bool applicable = false;    // both psh and ma(u) <= ma(v) nodewise
    std::string inapplicable_reason;
    double slack = 0.0;
    bool holds = false;
};

MinimumPrincipleReport minimum_principle_check(const DiscreteFunction& u, const DiscreteFunction& v,
                                               const Discretization& disc);

struct BarrierReport {
    double lower_margin = 0.0;  // min over interior nodes of u - sub
    double upper_margin = 0.0;  // min over interior nodes of harmonic - u
    double slack = 0.0;
    bool lower_holds = false;
    bool upper_holds = false;
    bool holds = false;
    DiscreteFunction harmonic;
};

BarrierReport barrier_bounds_check(const DiscreteFunction& u, const DiscreteFunction& sub,
                                   const Discretization& disc);

struct UniquenessReport {
    double gap = 0.0;  // max |u1 - u2| over interior nodes
    double threshold = 0.0;
    bool passed = false;
    SolveReport first;
    SolveReport second;
};

// Throws SolverError when either solve fails to converge.
UniquenessReport uniqueness_check(const Discretization& disc, const SolveConfig& config,
                                  const DiscreteFunction& guess1, const DiscreteFunction& guess2);

// Subsolution sampled on the lattice. s_factor multiplies the barrier weight
// s; any factor >= 1 keeps a valid subsolution with the same boundary values.
DiscreteFunction subsolution_guess(const Discretization& disc, const Subsolution& sub, double s_factor = 1.0);

}  // namespace hyperma
