#include "hyperma/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "hyperma/errors.hpp"
#include "hyperma/mixed_discriminant.hpp"
#include "hyperma/operators.hpp"
#include "hyperma/parallel.hpp"

namespace hyperma {

namespace {

std::string describe(std::span<const double> x) {
    std::ostringstream os;
    os << '(';
    for (std::size_t p = 0; p < x.size(); ++p) os << (p ? ", " : "") << x[p];
    os << ')';
    return os.str();
}

// Fraction t in (0, 1] with x + t w on the boundary, for x inside and x + w not.
double crossing(const DomainSpec& dom, std::span<const double> x, std::span<const double> w) {
    const Point c = dom.center_point();
    double t = 1.0;
    if (dom.kind == DomainKind::box) {
        for (std::size_t p = 0; p < x.size(); ++p) {
            if (w[p] == 0.0) continue;
            const double y = x[p] - c[p];
            t = std::min(t, (dom.half_width - (w[p] > 0.0 ? y : -y)) / std::abs(w[p]));
        }
    } else {
        double qa = 0.0, qb = 0.0, qc = 0.0;
        for (std::size_t p = 0; p < x.size(); ++p) {
            const double a = dom.kind == DomainKind::ball ? 1.0 : dom.coeffs[p / 4];
            const double y = x[p] - c[p];
            qa += a * w[p] * w[p];
            qb += 2.0 * a * y * w[p];
            qc += a * y * y;
        }
        qc -= dom.kind == DomainKind::ball ? dom.radius * dom.radius : 1.0;
        const double root = std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc));
        t = qb >= 0.0 ? -2.0 * qc / (qb + root) : (-qb + root) / (2.0 * qa);
    }
    if (std::abs(t - 1.0) < 1e-12) t = 1.0;
    return std::clamp(t, std::numeric_limits<double>::min(), 1.0);
}

// e_a conj(e_b)
struct UnitProducts {
    Quaternion e[4][4];
    UnitProducts() {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) e[a][b] = Quaternion::unit(a) * conj(Quaternion::unit(b));
    }
};

const UnitProducts& unit_products() {
    static const UnitProducts table;
    return table;
}

// Second differences (times h^2) along every stencil direction at slot k.
// node_value(idx) reads the lattice, trace_value(point) the boundary data.
template <class NodeValue, class TraceValue>
void second_differences(const Discretization& disc, std::size_t k, double center, NodeValue node_value,
                        TraceValue trace_value, std::vector<double>& out) {
    const std::size_t idx = disc.interior[k];
    const std::size_t nd = disc.directions.size();
    out.resize(nd);
    std::size_t a = disc.arm_start[k];
    const std::size_t a_end = disc.arm_start[k + 1];
    for (std::size_t dir = 0; dir < nd; ++dir) {
        const std::ptrdiff_t off = disc.directions[dir].offset;
        double tp = 1.0, tm = 1.0, vp = 0.0, vm = 0.0;
        bool cut_p = false, cut_m = false;
        while (a < a_end && disc.arms[a].direction == dir) {
            const CutArm& arm = disc.arms[a];
            if (arm.side > 0) {
                tp = arm.theta;
                vp = trace_value(arm.point);
                cut_p = true;
            } else {
                tm = arm.theta;
                vm = trace_value(arm.point);
                cut_m = true;
            }
            ++a;
        }
        if (!cut_p) vp = node_value(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + off));
        if (!cut_m) vm = node_value(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) - off));
        if (!cut_p && !cut_m) {
            out[dir] = vp + vm - 2.0 * center;
        } else {
            const double s = tp + tm;
            out[dir] = 2.0 * ((vp - center) / (tp * s) + (vm - center) / (tm * s));
        }
    }
}

// Hyperhermitian Hessian from the directional second differences.
HyperHermitianMatrix hessian_from_differences(const Discretization& disc, const std::vector<double>& diff) {
    const std::size_t n = disc.problem.n;
    const std::size_t d = 4 * n;
    const double h2 = disc.h * disc.h;
    const auto& e = unit_products().e;
    QuatMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t a = 0; a < 4; ++a) s += diff[4 * i + a];
        m(i, i) = Quaternion{s / h2, 0.0, 0.0, 0.0};
    }
    // Directions after the axes come in (+, -) pairs for p < q in different blocks.
    for (std::size_t dir = d; dir < diff.size(); dir += 2) {
        const StencilDirection& sd = disc.directions[dir];
        const double hpq = (diff[dir] - diff[dir + 1]) / (4.0 * h2);
        const std::size_t i = sd.p / 4, j = sd.q / 4;
        m(i, j) += hpq * e[sd.p % 4][sd.q % 4];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m(j, i) = conj(m(i, j));
    return HyperHermitianMatrix(std::move(m));
}

HyperHermitianMatrix hessian_at(const DiscreteFunction& u, const Discretization& disc, std::size_t k) {
    thread_local std::vector<double> diff;
    const auto& vals = u.nodes.values();
    second_differences(
        disc, k, vals[disc.interior[k]], [&](std::size_t i) { return vals[i]; },
        [&](std::size_t p) { return u.trace[p]; }, diff);
    return hessian_from_differences(disc, diff);
}

double rhs_value(const Problem& pr, std::span<const double> x, double u) {
    const double f = pr.f(x, u, 0.0, pr.n);
    if (!(f > 0.0)) throw PreconditionError("solver: right-hand side is not positive at " + describe(x));
    return f;
}

void check_shape(const DiscreteFunction& u, const Discretization& disc, const char* what) {
    if (u.nodes.size() != disc.grid.size() || u.trace.size() != disc.boundary_points.size()) {
        throw DimensionError(std::string(what) + ": function does not live on this discretization");
    }
}

struct NodeState {
    std::vector<HyperHermitianMatrix> hess;
    std::vector<double> det, f, fu, min_eig, g;
    std::size_t worst = 0;  // slot with the smallest eigenvalue
    bool positive = true;   // every determinant > 0

    double min_eigenvalue() const { return min_eig.empty() ? 0.0 : min_eig[worst]; }
    bool spsh(double floor) const { return positive && min_eigenvalue() >= floor; }
};

NodeState evaluate(const DiscreteFunction& u, const Discretization& disc) {
    const std::size_t m = disc.interior.size();
    NodeState s;
    s.hess.resize(m);
    s.det.resize(m);
    s.f.resize(m);
    s.fu.resize(m);
    s.min_eig.resize(m);
    s.g.resize(m);
    const std::size_t n = disc.problem.n;
    parallel_for(m, [&](std::size_t k) {
        const std::size_t node = disc.interior[k];
        thread_local Point x;
        x.resize(4 * n);
        u.nodes.position(node, x);
        s.hess[k] = hessian_at(u, disc, k);
        s.min_eig[k] = hyperma::min_eigenvalue(s.hess[k]);
        s.det[k] = moore_det(s.hess[k]);
        const double uv = u.nodes[node];
        s.f[k] = rhs_value(disc.problem, x, uv);
        s.fu[k] = disc.problem.f.du(x, uv, 0.0, n);
        s.g[k] = s.det[k] > 0.0 ? std::log(s.det[k]) - std::log(s.f[k]) : std::numeric_limits<double>::infinity();
    });
    for (std::size_t k = 0; k < m; ++k) {
        if (s.min_eig[k] < s.min_eig[s.worst]) s.worst = k;
        if (!(s.det[k] > 0.0)) s.positive = false;
    }
    return s;
}

double nodal_mixed(const HyperHermitianMatrix& x, const HyperHermitianMatrix& a) {
    const std::size_t n = a.size();
    return static_cast<double>(n) * mixed_with_repeats(x, a, n - 1);
}

// Derivative of G at u, acting on interior values with zero trace.
class Linearization {
public:
    Linearization(const Discretization& disc, const NodeState& state, Normalization norm)
        : disc_(disc), state_(state), scratch_(disc.grid.size(), 0.0), norm_(norm) {}

    void apply(const Vec& in, Vec& out) {
        for (std::size_t k = 0; k < in.size(); ++k) scratch_[disc_.interior[k]] = in[k];
        out.resize(in.size());
        parallel_for(in.size(), [&](std::size_t k) {
            thread_local std::vector<double> diff;
            second_differences(
                disc_, k, in[k], [&](std::size_t i) { return scratch_[i]; }, [](std::size_t) { return 0.0; }, diff);
            out[k] = row(k, hessian_from_differences(disc_, diff), in[k]);
        });
    }

    // Row entry for a unit value at the node itself.
    Vec diagonal() const {
        Vec d(disc_.interior.size());
        std::vector<double> diff;
        for (std::size_t k = 0; k < d.size(); ++k) {
            second_differences(
                disc_, k, 1.0, [](std::size_t) { return 0.0; }, [](std::size_t) { return 0.0; }, diff);
            d[k] = row(k, hessian_from_differences(disc_, diff), 1.0);
        }
        return d;
    }

    double row(std::size_t k, const HyperHermitianMatrix& hv, double v) const {
        const double den = norm_ == Normalization::exact ? state_.det[k] : state_.f[k];
        return nodal_mixed(hv, state_.hess[k]) / den - state_.fu[k] / state_.f[k] * v;
    }

private:
    const Discretization& disc_;
    const NodeState& state_;
    std::vector<double> scratch_;
    Normalization norm_;
};

LinearMap jacobi(const Vec& diag) {
    return [&diag](const Vec& in, Vec& out) {
        out.resize(in.size());
        for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] / diag[k];
    };
}

void set_interior(DiscreteFunction& u, const Discretization& disc, const Vec& vals) {
    for (std::size_t k = 0; k < vals.size(); ++k) u.nodes[disc.interior[k]] = vals[k];
}

}  // namespace

Discretization discretize(const Problem& problem, double h) {
    problem.domain.validate();
    if (problem.domain.n != problem.n || problem.phi.n() != problem.n) {
        throw DimensionError("discretize: problem dimensions disagree");
    }
    if (!(h > 0.0) || !std::isfinite(h)) throw PreconditionError("discretize: h must be positive");
    if (problem.f.depends_on_gradient()) {
        throw PreconditionError("discretize: the lattice solver does not support gradient-dependent f");
    }
    const std::size_t d = 4 * problem.n;
    const Point c = problem.domain.center_point();
    const auto ext = problem.domain.half_extent();
    const bool box = problem.domain.kind == DomainKind::box;

    Shape shape(d);
    Point origin(d);
    if (box) {
        const double cells = 2.0 * problem.domain.half_width / h;
        const double rounded = std::round(cells);
        if (rounded < 2.0 || std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
            throw PreconditionError("discretize: h must divide the box width into at least two cells");
        }
        for (std::size_t p = 0; p < d; ++p) {
            shape[p] = static_cast<std::size_t>(rounded) + 1;
            origin[p] = c[p] - problem.domain.half_width;
        }
    } else {
        for (std::size_t p = 0; p < d; ++p) {
            const auto m = static_cast<std::size_t>(std::ceil(ext[p] / h)) + 1;
            shape[p] = 2 * m;
            origin[p] = c[p] + (0.5 - static_cast<double>(m)) * h;
        }
    }
    std::size_t total = 1;
    for (auto s : shape) {
        if (total > (std::size_t{1} << 34) / s) throw PreconditionError("discretize: lattice too large");
        total *= s;
    }

    Discretization disc;
    disc.problem = problem;
    disc.h = h;
    disc.grid = GridFunction(problem.n, shape, h, origin);
    disc.kind.assign(total, NodeKind::exterior);
    disc.slot.assign(total, Discretization::npos);

    const auto& st = disc.grid.strides();
    for (std::size_t p = 0; p < d; ++p) {
        disc.directions.push_back({p, p, 0, static_cast<std::ptrdiff_t>(st[p])});
    }
    for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = p + 1; q < d; ++q) {
            if (p / 4 == q / 4) continue;
            const auto sp = static_cast<std::ptrdiff_t>(st[p]);
            const auto sq = static_cast<std::ptrdiff_t>(st[q]);
            disc.directions.push_back({p, q, 1, sp + sq});
            disc.directions.push_back({p, q, -1, sp - sq});
        }
    }

    Point x(d);
    for (std::size_t idx = 0; idx < total; ++idx) {
        disc.grid.position(idx, x);
        if (problem.domain.contains(x)) {
            disc.kind[idx] = NodeKind::interior;
            disc.slot[idx] = disc.interior.size();
            disc.interior.push_back(idx);
        }
    }
    if (disc.interior.empty()) throw PreconditionError("discretize: no interior nodes at this h");

    // Interior nodes never lie on the lattice faces, so every neighbour index is valid.
    Point w(d), y(d);
    disc.arm_start.reserve(disc.interior.size() + 1);
    for (std::size_t k = 0; k < disc.interior.size(); ++k) {
        disc.arm_start.push_back(disc.arms.size());
        const std::size_t idx = disc.interior[k];
        disc.grid.position(idx, x);
        for (std::size_t dir = 0; dir < disc.directions.size(); ++dir) {
            const StencilDirection& sd = disc.directions[dir];
            for (int side : {1, -1}) {
                const auto nb =
                    static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + side * sd.offset);
                if (disc.kind[nb] == NodeKind::interior) continue;
                if (disc.kind[nb] == NodeKind::exterior) {
                    disc.kind[nb] = NodeKind::boundary;
                    disc.boundary.push_back(nb);
                }
                std::fill(w.begin(), w.end(), 0.0);
                w[sd.p] = side * h;
                if (sd.q != sd.p) w[sd.q] = side * sd.sign * h;
                const double t = crossing(problem.domain, x, w);
                for (std::size_t p = 0; p < d; ++p) y[p] = x[p] + t * w[p];
                disc.arms.push_back({static_cast<std::uint32_t>(dir), static_cast<std::int8_t>(side), t,
                                     disc.boundary_points.size()});
                disc.boundary_points.push_back(y);
                disc.boundary_values.push_back(problem.phi.value(y));
            }
        }
    }
    disc.arm_start.push_back(disc.arms.size());
    std::sort(disc.boundary.begin(), disc.boundary.end());
    for (std::size_t idx : disc.boundary) {
        disc.grid.position(idx, x);
        disc.grid[idx] = problem.phi.value(x);
    }
    return disc;
}

DiscreteFunction sample_on(const Discretization& disc, const std::function<double(std::span<const double>)>& fn) {
    DiscreteFunction u{disc.grid, {}};
    Point x(disc.grid.dim());
    for (std::size_t idx : disc.interior) {
        u.nodes.position(idx, x);
        u.nodes[idx] = fn(x);
    }
    u.trace.resize(disc.boundary_points.size());
    for (std::size_t p = 0; p < u.trace.size(); ++p) u.trace[p] = fn(disc.boundary_points[p]);
    return u;
}

DiscreteFunction assemble(const Discretization& disc, const std::vector<double>& interior) {
    if (interior.size() != disc.interior.size()) throw DimensionError("assemble: wrong number of interior values");
    DiscreteFunction u{disc.grid, disc.boundary_values};
    set_interior(u, disc, interior);
    return u;
}

std::vector<double> interior_values(const Discretization& disc, const DiscreteFunction& u) {
    check_shape(u, disc, "interior_values");
    std::vector<double> out(disc.interior.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = u.nodes[disc.interior[k]];
    return out;
}

HyperHermitianMatrix discrete_hessian(const DiscreteFunction& u, const Discretization& disc, std::size_t k) {
    check_shape(u, disc, "discrete_hessian");
    if (k >= disc.interior.size()) throw DimensionError("discrete_hessian: slot out of range");
    return hessian_at(u, disc, k);
}

void SolveConfig::validate() const {
    if (!(tol > 0.0)) throw PreconditionError("SolveConfig: tol must be positive");
    if (max_newton == 0) throw PreconditionError("SolveConfig: max_newton must be positive");
    if (!(damping > 0.0 && damping < 1.0)) throw PreconditionError("SolveConfig: damping must lie in (0, 1)");
    if (!(spsh_floor > 0.0)) throw PreconditionError("SolveConfig: spsh_floor must be positive");
    if (!(min_step > 0.0 && min_step < 1.0)) throw PreconditionError("SolveConfig: min_step must lie in (0, 1)");
}

std::vector<double> residual(const DiscreteFunction& u, const Discretization& disc, double spsh_floor) {
    check_shape(u, disc, "residual");
    NodeState s = evaluate(u, disc);
    for (std::size_t k = 0; k < s.g.size(); ++k) {
        if (s.min_eig[k] < spsh_floor || !(s.det[k] > 0.0)) {
            const std::size_t node = disc.interior[k];
            std::ostringstream os;
            os << "residual: Hessian not positive at node " << node << ' ' << describe(u.nodes.position(node))
               << " (min eigenvalue " << s.min_eig[k] << ")";
            throw SolverError(os.str());
        }
    }
    return s.g;
}

std::vector<double> boundary_residual(const DiscreteFunction& u, const Discretization& disc) {
    check_shape(u, disc, "boundary_residual");
    std::vector<double> out(u.trace.size());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = u.trace[p] - disc.boundary_values[p];
    return out;
}

std::optional<NonSpshNode> find_non_spsh(const DiscreteFunction& u, const Discretization& disc, double floor) {
    check_shape(u, disc, "find_non_spsh");
    std::optional<NonSpshNode> worst;
    for (std::size_t k = 0; k < disc.interior.size(); ++k) {
        const double lam = min_eigenvalue(hessian_at(u, disc, k));
        if (lam < floor && (!worst || lam < worst->min_eigenvalue)) {
            worst = NonSpshNode{disc.interior[k], u.nodes.position(disc.interior[k]), lam};
        }
    }
    return worst;
}

std::vector<double> linearized_apply(const DiscreteFunction& u, const DiscreteFunction& v, const Discretization& disc,
                                     Normalization normalization) {
    check_shape(u, disc, "linearized_apply");
    check_shape(v, disc, "linearized_apply");
    NodeState s = evaluate(u, disc);
    if (!s.spsh(0.0)) throw SolverError("linearized_apply: u is not strictly plurisubharmonic");
    Linearization lin(disc, s, normalization);
    std::vector<double> out(disc.interior.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = lin.row(k, hessian_at(v, disc, k), v.nodes[disc.interior[k]]);
    return out;
}

SolveResult solve_dirichlet(const Discretization& disc, const SolveConfig& config, const DiscreteFunction& initial) {
    config.validate();
    check_shape(initial, disc, "solve_dirichlet");
    const auto start = std::chrono::steady_clock::now();

    SolveResult res{initial, {}, disc, std::nullopt};
    SolveReport& rep = res.report;
    rep.config = config;
    rep.h = disc.h;
    rep.interior_nodes = disc.interior.size();
    rep.boundary_points = disc.boundary_points.size();
    DiscreteFunction& u = res.u;
    u.trace = disc.boundary_values;
    for (std::size_t idx : disc.boundary) u.nodes[idx] = disc.grid[idx];

    NodeState state = evaluate(u, disc);
    if (!state.spsh(config.spsh_floor)) {
        const std::size_t node = disc.interior[state.worst];
        std::ostringstream os;
        os << "initial guess is not strictly plurisubharmonic at node " << node << ' '
           << describe(u.nodes.position(node)) << " (min eigenvalue " << state.min_eigenvalue() << ")";
        rep.failure = os.str();
    } else {
        double gmax = norm_inf(state.g);
        rep.residual_history.push_back(gmax);
        rep.min_eigenvalues.push_back(state.min_eigenvalue());
        const std::size_t m = disc.interior.size();
        while (true) {
            if (gmax <= config.tol) {
                rep.converged = true;
                break;
            }
            if (rep.newton_iterations >= config.max_newton) {
                rep.failure = "Newton iteration cap reached";
                break;
            }
            Linearization lin(disc, state, Normalization::exact);
            const Vec diag = lin.diagonal();
            Vec rhs(m), delta(m, 0.0);
            for (std::size_t k = 0; k < m; ++k) rhs[k] = -state.g[k];
            const KrylovResult kr =
                gmres([&](const Vec& in, Vec& out) { lin.apply(in, out); }, rhs, delta, config.krylov, jacobi(diag));
            rep.krylov_iterations.push_back(kr.iterations);
            rep.krylov_residuals.push_back(kr.residual);

            const Vec base = interior_values(disc, u);
            DiscreteFunction trial = u;
            Vec vals(m);
            double t = 1.0;
            bool accepted = false;
            while (t >= config.min_step) {
                for (std::size_t k = 0; k < m; ++k) vals[k] = base[k] + t * delta[k];
                set_interior(trial, disc, vals);
                NodeState next = evaluate(trial, disc);
                if (next.spsh(config.spsh_floor)) {
                    const double gnext = norm_inf(next.g);
                    if (gnext < gmax) {
                        u = std::move(trial);
                        state = std::move(next);
                        gmax = gnext;
                        accepted = true;
                        break;
                    }
                }
                t *= config.damping;
            }
            if (!accepted) {
                std::ostringstream os;
                os << "line search stalled below step " << config.min_step << " at residual " << gmax;
                rep.failure = os.str();
                break;
            }
            ++rep.newton_iterations;
            rep.step_lengths.push_back(t);
            rep.residual_history.push_back(gmax);
            rep.min_eigenvalues.push_back(state.min_eigenvalue());
        }
        rep.final_residual = gmax;
    }

    rep.boundary_residual = norm_inf(boundary_residual(u, disc));
    if (disc.problem.exact) {
        Point x(u.nodes.dim());
        double err = 0.0;
        for (std::size_t idx : disc.interior) {
            u.nodes.position(idx, x);
            err = std::max(err, std::abs(u.nodes[idx] - disc.problem.exact->value(x)));
        }
        rep.max_error = err;
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

SolveResult solve_dirichlet(const Problem& problem, double h, const SolveConfig& config,
                            std::optional<DiscreteFunction> initial) {
    Discretization disc = discretize(problem, h);
    if (initial) return solve_dirichlet(disc, config, *initial);
    BuildReport built = build_subsolution(problem);
    SolveResult res = solve_dirichlet(disc, config, subsolution_guess(disc, built.sub));
    res.subsolution = std::move(built);
    return res;
}

std::vector<double> discrete_laplacian(const DiscreteFunction& u, const Discretization& disc) {
    check_shape(u, disc, "discrete_laplacian");
    const std::size_t d = u.nodes.dim();
    const double h2 = disc.h * disc.h;
    const auto& vals = u.nodes.values();
    std::vector<double> out(disc.interior.size());
    std::vector<double> diff;
    for (std::size_t k = 0; k < out.size(); ++k) {
        second_differences(
            disc, k, vals[disc.interior[k]], [&](std::size_t i) { return vals[i]; },
            [&](std::size_t p) { return u.trace[p]; }, diff);
        double s = 0.0;
        for (std::size_t p = 0; p < d; ++p) s += diff[p];
        out[k] = s / h2;
    }
    return out;
}

DiscreteFunction poisson_solve(const Discretization& disc, const std::vector<double>& rhs,
                               const KrylovSettings& settings) {
    const std::size_t m = disc.interior.size();
    if (rhs.size() != m) throw DimensionError("poisson_solve: rhs size differs from the interior node count");
    // Lap_h(w_I + w_B) = rhs with w_B carrying only the boundary data.
    DiscreteFunction data = assemble(disc, Vec(m, 0.0));
    const Vec lap_b = discrete_laplacian(data, disc);
    Vec b(m);
    for (std::size_t k = 0; k < m; ++k) b[k] = rhs[k] - lap_b[k];

    DiscreteFunction scratch{disc.grid.with_values(Vec(disc.grid.size(), 0.0)), Vec(disc.boundary_points.size(), 0.0)};
    const LinearMap lap = [&](const Vec& in, Vec& out) {
        set_interior(scratch, disc, in);
        out = discrete_laplacian(scratch, disc);
    };
    Vec diag(m);
    {
        DiscreteFunction unit = scratch;
        const std::size_t d = unit.nodes.dim();
        std::vector<double> diff;
        for (std::size_t k = 0; k < m; ++k) {
            second_differences(
                disc, k, 1.0, [](std::size_t) { return 0.0; }, [](std::size_t) { return 0.0; }, diff);
            double s = 0.0;
            for (std::size_t p = 0; p < d; ++p) s += diff[p];
            diag[k] = s / (disc.h * disc.h);
        }
    }
    Vec w(m, 0.0);
    const KrylovResult kr = gmres(lap, b, w, settings, jacobi(diag));
    if (!kr.converged) throw SolverError("poisson_solve: GMRES did not converge");
    return assemble(disc, w);
}

DiscreteFunction harmonic_extension(const Discretization& disc, const KrylovSettings& settings) {
    return poisson_solve(disc, Vec(disc.interior.size(), 0.0), settings);
}

double comparison_slack(double h) { return kComparisonSlackAbs + kComparisonSlackC * h * h; }

MinimumPrincipleReport minimum_principle_check(const DiscreteFunction& u, const DiscreteFunction& v,
                                               const Discretization& disc) {
    check_shape(u, disc, "minimum_principle_check");
    check_shape(v, disc, "minimum_principle_check");
    MinimumPrincipleReport rep;
    rep.slack = comparison_slack(disc.h);
    rep.applicable = true;
    for (std::size_t k = 0; k < disc.interior.size() && rep.applicable; ++k) {
        const HyperHermitianMatrix hu = hessian_at(u, disc, k);
        const HyperHermitianMatrix hv = hessian_at(v, disc, k);
        const auto psh = [](const HyperHermitianMatrix& m) {
            const auto ev = eigenvalues(m);
            return ev.front() >= -kPshTol * (1.0 + std::max(std::abs(ev.front()), std::abs(ev.back())));
        };
        std::ostringstream os;
        if (!psh(hu) || !psh(hv)) {
            os << "not plurisubharmonic at node " << disc.interior[k];
        } else {
            const double mu = moore_det(hu);
            const double mv = moore_det(hv);
            if (mu > mv + 1e-8 * (1.0 + std::abs(mv))) {
                os << "ma(u) = " << mu << " exceeds ma(v) = " << mv << " at node " << disc.interior[k];
            }
        }
        if (!os.str().empty()) {
            rep.applicable = false;
            rep.inapplicable_reason = os.str();
        }
    }
    rep.boundary_min = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < u.trace.size(); ++p) rep.boundary_min = std::min(rep.boundary_min, u.trace[p] - v.trace[p]);
    rep.interior_min = rep.boundary_min;
    for (std::size_t idx : disc.interior) rep.interior_min = std::min(rep.interior_min, u.nodes[idx] - v.nodes[idx]);
    rep.holds = rep.interior_min >= rep.boundary_min - rep.slack;
    return rep;
}

BarrierReport barrier_bounds_check(const DiscreteFunction& u, const DiscreteFunction& sub,
                                   const Discretization& disc) {
    check_shape(u, disc, "barrier_bounds_check");
    check_shape(sub, disc, "barrier_bounds_check");
    BarrierReport rep;
    rep.slack = comparison_slack(disc.h);
    rep.harmonic = harmonic_extension(disc);
    rep.lower_margin = std::numeric_limits<double>::infinity();
    rep.upper_margin = std::numeric_limits<double>::infinity();
    for (std::size_t idx : disc.interior) {
        rep.lower_margin = std::min(rep.lower_margin, u.nodes[idx] - sub.nodes[idx]);
        rep.upper_margin = std::min(rep.upper_margin, rep.harmonic.nodes[idx] - u.nodes[idx]);
    }
    rep.lower_holds = rep.lower_margin >= -rep.slack;
    rep.upper_holds = rep.upper_margin >= -rep.slack;
    rep.holds = rep.lower_holds && rep.upper_holds;
    return rep;
}

UniquenessReport uniqueness_check(const Discretization& disc, const SolveConfig& config,
                                  const DiscreteFunction& guess1, const DiscreteFunction& guess2) {
    SolveResult a = solve_dirichlet(disc, config, guess1);
    if (!a.report.converged) throw SolverError("uniqueness_check: first solve failed: " + a.report.failure);
    SolveResult b = solve_dirichlet(disc, config, guess2);
    if (!b.report.converged) throw SolverError("uniqueness_check: second solve failed: " + b.report.failure);
    UniquenessReport rep;
    rep.threshold = 10.0 * config.tol;
    for (std::size_t idx : disc.interior) rep.gap = std::max(rep.gap, std::abs(a.u.nodes[idx] - b.u.nodes[idx]));
    rep.passed = rep.gap <= rep.threshold;
    rep.first = std::move(a.report);
    rep.second = std::move(b.report);
    return rep;
}

DiscreteFunction subsolution_guess(const Discretization& disc, const Subsolution& sub, double s_factor) {
    if (!(s_factor >= 1.0)) throw PreconditionError("subsolution_guess: s_factor must be at least 1");
    Subsolution scaled = sub;
    scaled.s *= s_factor;
    return sample_on(disc, [&](std::span<const double> x) { return scaled.value(x); });
}

}  // namespace hyperma
