#pragma once

// Subsolutions u = phi_ext + s (exp(k r) - 1) of det(u_{i j-bar}) >= f and
// their sampled verification.

#include <cstddef>
#include <cstdint>
#include <limits>

#include <Eigen/Core>

#include "hyperma/domain.hpp"
#include "hyperma/quat_matrix.hpp"

namespace hyperma {

struct Subsolution {
    TestFunction phi_ext;  // psh extension of the boundary data
    TestFunction r;        // defining function
    double s = 0.0;
    double k = 0.0;

    double value(std::span<const double> x) const;
    Eigen::VectorXd gradient(std::span<const double> x) const;
    Eigen::MatrixXd real_hessian(std::span<const double> x) const;
    HyperHermitianMatrix hessian(std::span<const double> x) const;
    double ma(std::span<const double> x) const;
};

struct Extension {
    TestFunction function;
    double correction = 0.0;           // c in phi + c r; 0 for the identity extension
    double min_eigenvalue_before = 0.0;
    double min_eigenvalue_after = 0.0;
    bool identity = true;
};

// phi itself when its Hessian is non-negative at every sample of the closed
// domain; otherwise phi + c r with the smallest c = -lambda_min / alpha that
// makes the sampled Hessians non-negative. phi + c r agrees with phi on the
// boundary. Throws ConstructionError if the corrected function is still not
// psh, or if a correction is needed on a box.
Extension extend_boundary_data(const TestFunction& phi, const DomainSpec& domain, const SampleSet& samples);

struct AlphaReport {
    double alpha = 0.0;
    Point argmin;
    std::size_t samples = 0;
};

// min over interior and boundary samples of the smallest eigenvalue of the
// Hessian of r. Throws PreconditionError when it is not positive.
AlphaReport alpha_of(const DomainSpec& domain, const SampleSet& samples);

struct GrowthReport {
    double constant = 0.0;       // C with f(q, w, eta) <= C (1 + |eta|^n)
    double worst_eta = 0.0;
    double worst_u = 0.0;
    Point worst_point;
    std::size_t evaluations = 0;
};

inline constexpr double kGrowthEtaMin = 1e-3;
inline constexpr double kGrowthEtaMax = 1e3;
inline constexpr int kGrowthEtaSteps = 25;

// Sampled C(m) over q in the samples, w in {m, m - 1, m - 10} and |eta| in
// {0} plus kGrowthEtaSteps log-spaced magnitudes in [kGrowthEtaMin, kGrowthEtaMax].
// Throws ConstructionError when f / (1 + |eta|^n) still grows at the top of
// the range, PreconditionError when f <= 0 or df/du < 0 at a sample.
GrowthReport rhs_growth_constant(const RhsFunction& f, double m, std::size_t n, const SampleSet& samples);

struct SubsolutionOptions {
    std::size_t interior_samples = kDefaultInteriorSamples;
    std::size_t boundary_samples = kDefaultBoundarySamples;
    std::uint64_t seed = kDefaultSampleSeed;
    int max_k_doublings = 16;  // k in {1, 2, ..., 2^max_k_doublings}
    int min_s_exponent = -10;  // s in {2^min_s_exponent, ..., 2^max_s_exponent}
    int max_s_exponent = 40;
};

struct BuildReport {
    Subsolution sub;
    Extension extension;
    AlphaReport alpha;
    GrowthReport growth;
    double m = 0.0;          // max phi on boundary samples
    double c1 = 0.0;         // 2^{n-1} max |grad phi_ext|^n
    double c2 = 0.0;         // 2^{n-1}
    // C(m) C2 |grad r|^n <= k alpha^{n-1} |grad r|^2 at every sample, for the chosen k.
    bool k_inequality_holds = false;
    // Smallest k = 2^j (j <= 60) satisfying that inequality; infinity if none.
    double k_inequality_min = std::numeric_limits<double>::infinity();
    double chain_slack = 0.0;   // min over samples of bound - f at the chosen (s, k)
    double det_slack = 0.0;     // min over samples of (ma(u) - bound) / (1 + bound)
    std::size_t candidates = 0;
    SampleSet samples;
};

// Doubling search over k (outer) and s (inner) for the first pair with
// f(q, u, grad u) <= (s k alpha e^{kr})^n (1 + (k/alpha)|grad r|^2) and
// ma(u) >= f at every sample. Throws ConstructionError after the search cap
// with the worst sample of the last candidate.
BuildReport build_subsolution(const Problem& problem, const SubsolutionOptions& options = {});

struct VerifyReport {
    double boundary_mismatch = 0.0;  // max |u - phi| on boundary samples
    Point boundary_worst;
    double min_margin = std::numeric_limits<double>::infinity();  // min ma(u) - f
    Point margin_worst;
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    bool psh = false;
    bool boundary_ok = false;
    bool margin_ok = false;
    bool passed = false;
    std::size_t interior_samples = 0;
    std::size_t boundary_samples = 0;
};

inline constexpr double kBoundaryMismatchTol = 1e-9;
inline constexpr double kMarginTol = 1e-9;

VerifyReport verify_subsolution(const Subsolution& sub, const Problem& problem, const SampleSet& samples);

}  // namespace hyperma
