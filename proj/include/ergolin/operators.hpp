#pragma once

// Declarative operator descriptions and their actions on sparse vectors.
//
// Backward shift convention: (Tx)_n = w_{n+1} x_{n+1}, i.e. the stored entry
// (index n, value c) moves to (n-1, w_n * c). The unilateral shift discards
// whatever crosses below index 0.

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ergolin/space.hpp"

namespace ergolin {

// One window of a step-profile weight sequence: w_k = value for lo <= k <= hi.
struct WeightWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    double value = 1.0;
};

struct WeightSpec {
    enum class Kind { Const, Table, BrDesigned, StepProfile };
    Kind kind = Kind::Const;

    double const_value = 2.0;

    // Table weights cover exactly the listed indices; querying outside throws.
    std::map<std::int64_t, double> table;

    // step-profile: w_k = step_base everywhere except inside the (sorted,
    // disjoint) windows, where the window value applies. log W(x) is then a
    // gentle ramp with isolated staircase jumps.
    double step_base = 1.0;
    std::vector<WeightWindow> step_windows;

    // br-designed: positive side is a constant; for k <= 0 the weight is the
    // ratio rho^{d(i)} / rho^{d(i-1)} driving the backward partial product
    // P_i = prod_{k=1-i}^{0} w_k to rho^{dist(i, A)} with A = {n >= 1 : n ==
    // residue (mod modulus)}. On A the product is exactly 1.
    double rho = 0.5;
    std::int64_t residue = 1;
    std::int64_t modulus = 2;
    double positive_value = 2.0;

    // Declared boundedness witness; every queried weight is checked against it.
    double bound = 4096.0;

    double at(std::int64_t index) const;

    static WeightSpec constant(double w, double bound = 4096.0);
    static WeightSpec from_table(std::map<std::int64_t, double> t, double bound = 4096.0);
    static WeightSpec br_designed(std::int64_t residue, std::int64_t modulus, double rho,
                                  double positive_value);
    static WeightSpec step_profile(double base, std::vector<WeightWindow> windows,
                                   double bound = 4096.0);
};

struct OperatorSpec;

struct DirectSumPart {
    std::int64_t lo = 0;  // global index range [lo, hi), local coordinates are index - lo
    std::int64_t hi = 0;
    std::shared_ptr<const OperatorSpec> op;
};

struct OperatorSpec {
    enum class Variant { Shift, BlockDiag, DirectSum };
    Variant variant = Variant::Shift;

    // Shift
    WeightSpec weights;
    bool bilateral = false;

    // BlockDiag: coordinate k is multiplied by exp(2*pi*i*angles[k]).
    std::vector<double> angles;

    // DirectSum: disjoint index ranges, each handled by its own operator.
    std::vector<DirectSumPart> parts;

    static OperatorSpec backward_shift(WeightSpec w, bool bilateral);
    static OperatorSpec block_diag(std::vector<double> angles);
    static OperatorSpec direct_sum(std::vector<DirectSumPart> parts);

    Complex block_phase(std::size_t k) const;  // cached exp(2 pi i angle_k)

private:
    mutable std::vector<Complex> phase_cache_;
};

struct VisitRecord {
    std::int64_t horizon = 0;
    std::vector<double> norms;  // norms[i-1] = ||T^i x0||, i = 1..horizon
    std::vector<std::int64_t> tracked_coords;
    // tracked[j][i-1] = coordinate tracked_coords[j] of T^i x0
    std::vector<std::vector<Complex>> tracked;
    std::uint64_t x0_digest = 0;
    bool overflow = false;       // norms truncated at overflow_step when set
    std::int64_t overflow_step = -1;
};

SparseVector apply(const OperatorSpec& op, const SparseVector& v);

// Streams T^i x0 for i = 1..horizon without materializing intermediate maps.
// For modest workloads every norm is produced by the same multiplications an
// i-fold apply() would perform; a constant-weight unilateral c0 fast path
// (log-domain suffix maximum) takes over when support x horizon is large.
VisitRecord orbit(const OperatorSpec& op, const SparseVector& x0, std::int64_t horizon,
                  const SpaceTag& space, std::vector<std::int64_t> tracked_coords = {});

inline constexpr double kNormOverflow = 1e300;

struct EigenField {
    SparseVector vector;
    double residual;    // measured ||T E - lambda E|| in the c0 norm
    double tail_bound;  // series tail bound used to pick the truncation
    std::int64_t trunc;
};

// E(lambda) = sum_{n=0}^{M} lambda^n / (w_1...w_n) e_n for a shift, truncated
// where the weight-product tail drops below 1e-12 (M capped at 1e4).
EigenField eigenvector_field(const OperatorSpec& op, Complex lambda, std::int64_t trunc = -1);

struct PeriodicPoint {
    SparseVector vector;
    double residual;  // measured ||T^N v - v||_c0
    double angle;     // eigenvalue angle in [0,1)
};

std::vector<PeriodicPoint> periodic_points(const OperatorSpec& op, std::int64_t N,
                                           std::int64_t trunc = -1);

json operator_to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const json& j);

}  // namespace ergolin
