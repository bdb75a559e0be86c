#pragma once

// Random-phase (Steinhaus-type) sampling along unimodular eigenvectors,
// periodic point measures and their equidistributed approximants, plus the
// small amount of simultaneous-approximation machinery they rely on.

#include <cstdint>
#include <optional>
#include <vector>

#include "ergolin/measures.hpp"
#include "ergolin/operators.hpp"

namespace ergolin {

struct EigenvectorData {
    SparseVector vector;
    double angle = 0.0;     // eigenvalue exp(2 pi i angle)
    double residual = 0.0;  // measured ||T v - lambda v|| in the c0 norm
    std::optional<std::int64_t> order;  // smallest q >= 1 with q*angle integral
};

// Relative residual admissible for sampling along an eigenvector.
inline constexpr double kEigenResidualTol = 1e-9;
// Relative residual admissible for an N-step return to count as periodic.
inline constexpr double kReturnResidualTol = 1e-6;

// exp(2 pi i angle); quarter turns come out as exact unit complex numbers so
// order-4 rotations compose to the identity bitwise.
Complex unit_phase(double angle);

// Smallest q in [1, max_den] with |q*angle - round(q*angle)| <= tol, if any.
std::optional<std::int64_t> detect_angle_order(double angle, std::int64_t max_den = 10000,
                                               double tol = 1e-9);

// Eigenvector of a weighted backward shift at exp(2 pi i angle), built from
// the weight-product series and tagged with its measured residual and order.
EigenvectorData eigen_from_shift(const OperatorSpec& op, double angle,
                                 std::int64_t trunc = -1);

// Coordinate vector e_k of a diagonal rotation block.
EigenvectorData eigen_from_block(const OperatorSpec& op, std::size_t k);

// lcm of the finite orders; NotCommonPeriod when some angle has none or the
// lcm exceeds 1e9.
std::int64_t common_period(const std::vector<EigenvectorData>& eigvecs);

// n_samples atoms sum_j chi_j v_j with independent uniform phases chi_j,
// uniform weights. ResidualTooLarge when an eigenvector residual exceeds
// kEigenResidualTol * ||v||.
EmpiricalMeasure sample_steinhaus(const std::vector<EigenvectorData>& eigvecs,
                                  std::int64_t n_samples, const SpaceTag& space,
                                  std::uint64_t seed, ProjectionWindow window = {});

// Uniform measure on the orbit a, Ta, ..., T^{N-1}a. NotPeriodic when the
// measured return ||T^N a - a|| exceeds kReturnResidualTol * ||a||.
EmpiricalMeasure periodic_measure(const OperatorSpec& op, const SparseVector& a,
                                  std::int64_t N, const SpaceTag& space,
                                  ProjectionWindow window = {});

// Equidistributed approximant: atoms T^t(sum_j lambda_j^{n_j} u_j) over all
// phase tuples n in [0,N)^s (tuple-major) and t in [0,Q), uniform weights.
// Throws NotCommonPeriod when some ||T^Q u_j - u_j|| is too large,
// DependentAngles when the free angles admit an integer relation with
// coefficients up to 20, and TooManyAtoms past 1e6 atoms. The construction
// asserts its own invariance defect against the measured return residuals
// (up to 16384 atoms; larger measures defer to the caller).
EmpiricalMeasure periodic_approximation(const OperatorSpec& op,
                                        const std::vector<EigenvectorData>& eigvecs,
                                        const std::vector<double>& free_angles,
                                        std::int64_t Q, std::int64_t N,
                                        const SpaceTag& space, ProjectionWindow window = {},
                                        int threads = 0);

struct KroneckerResult {
    std::int64_t n = 0;
    double max_deviation = 0.0;
    std::int64_t scanned = 0;
};

json kronecker_to_json(const KroneckerResult& r);

// Smallest n <= max_n with max_k |exp(2 pi i n angle_k) - target_k| < eps.
// Rational angles are not rejected here; a degenerate input simply fails the
// scan and surfaces as NotFound.
KroneckerResult kronecker_search(const std::vector<double>& angles,
                                 const std::vector<Complex>& targets, double eps,
                                 std::int64_t max_n);

struct DependenceCertificate {
    std::vector<std::int64_t> m;  // integer coefficients, not all zero
    double deviation = 0.0;       // |sum m_k angle_k - nearest integer|
};

// First integer relation sum m_k angle_k = 0 (mod 1) within tol, enumerating
// coefficient vectors by max-norm ring then lexicographically, keeping only
// the canonical sign (first nonzero coefficient positive). nullopt when no
// relation with |m|_inf <= max_coeff exists; BudgetExceeded when the
// enumeration would run past ~4e7 tuples.
std::optional<DependenceCertificate> rational_dependence(const std::vector<double>& angles,
                                                         std::int64_t max_coeff, double tol);

}  // namespace ergolin
