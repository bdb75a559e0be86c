#pragma once

// Designed initial vectors whose orbits witness prescribed visit behavior,
// packaged with machine-checkable certificates. Every claim a certificate
// carries is recomputed from (operator, vector, horizon) alone by
// verify_certificate, through the same measurement code the builders use,
// and must agree bitwise.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergolin/density.hpp"
#include "ergolin/operators.hpp"

namespace ergolin {

struct Schedule {
    std::vector<IntegerSet> sets;          // pairwise disjoint subsets of [1, horizon]
    std::vector<double> declared_density;  // densities the design promises per set
    std::int64_t horizon = 0;
    std::int64_t min_gap_within = 0;  // min gap between consecutive members of one set
    std::int64_t min_gap_across = 0;  // min gap between members of different sets
    std::optional<int> dyadic_p;      // set when produced by dyadic_schedule
};

// Validates disjointness and ranges, computes the gap statistics.
Schedule make_schedule(std::vector<IntegerSet> sets, std::vector<double> declared,
                       std::int64_t horizon);

// P residue classes: set p is {n == 2^{p-1} (mod 2^p), n >= p * 2^{p+1}},
// declared density 2^{-p}. Requires 1 <= P <= 20.
Schedule dyadic_schedule(int P, std::int64_t horizon);

json schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const json& j);

struct WitnessClaim {
    std::string label;
    std::string kind;  // measurement id: visit-error-max, visit-density-lower,
                       // visit-density-upper, density-upper, density-lower,
                       // norm-max, norm-min, coordinate-floor, c-estimate
    std::int64_t lo = 0;        // measured step window (inclusive); 0,0 if unused
    std::int64_t hi = 0;
    std::int64_t horizon = 0;   // orbit steps this claim is measured over
    double measured = 0.0;
    double bound = 0.0;
    std::string comparison;     // "<=" or ">="
    bool pass = false;
    std::int64_t target = -1;   // schedule slot / block / sample index, -1 if n/a
};

struct WitnessCertificate {
    std::string kind;  // fhc | dist-null | dist-irregular | br-inequality
    json op;
    json payload;      // construction inputs sufficient to rebuild and re-measure
    std::int64_t horizon = 0;
    std::vector<WitnessClaim> claims;
    bool pass = false;  // conjunction of the claim flags
};

json certificate_to_json(const WitnessCertificate& cert);
WitnessCertificate certificate_from_json(const json& j);

struct VerifyReport {
    bool match = false;  // recomputation agrees with the stored claims bitwise
    bool pass = false;   // recomputed conjunction
    std::vector<std::string> mismatches;
};

VerifyReport verify_certificate(const json& cert);

// ---- scheduled visits ----

struct FhcWitness {
    SparseVector x0;
    WitnessCertificate certificate;
};

// Places weighted copies of each target vector on the blocks of its schedule
// set (earlier targets take priority on contested coordinates), so that T^n x0
// restricted to [0, len(target_p)) reproduces target_p within eps for every
// n in set p. Throws ScheduleTooTight when the predicted worst-case window
// error of some block exceeds eps.
FhcWitness build_fhc_vector(const OperatorSpec& op, const std::vector<SparseVector>& targets,
                            const Schedule& schedule, double eps, const SpaceTag& space);

// ---- norm collapse along density-one sets ----

struct DistWitness {
    SparseVector x0;
    WitnessCertificate certificate;
};

// Shift with a gentle exponential weight ramp plus one short high-weight
// window; the witness designs below rely on the single staircase jump in
// log W to switch spike contributions on and off within a block.
OperatorSpec dist_null_operator(std::int64_t g, std::int64_t depth, std::int64_t b1 = 32);

// Geometric blocks [b_r, b_{r+1}), b_r = b1 * g^{r-1}. The orbit norm stays
// below 0.1 on a set of upper density >= 1 - 2/depth, stays below 1/r on the
// last (1 - 1/r) fraction of block r, and visits the annulus (1, 2] along a
// set of lower density <= 0.05.
DistWitness build_dist_null_vector(const OperatorSpec& op, std::int64_t g, std::int64_t depth,
                                   std::int64_t b1, const SpaceTag& space);

// Alternating-regime weights: one high-weight window per even regime.
OperatorSpec dist_irregular_operator(std::int64_t depth, std::int64_t L1 = 3,
                                     std::int64_t c1 = 64);

// Regimes k = 1..depth of lengths L_k = L1 * 6^{k-1} starting at c_1 = c1;
// odd regimes keep the norm <= 1/depth, even regimes keep it >= depth, each
// along a set of upper density >= 1 - 2/depth measured at the end of the
// last regime of its parity. depth must be even.
DistWitness build_dist_irregular_vector(const OperatorSpec& op, std::int64_t depth,
                                        std::int64_t L1, std::int64_t c1,
                                        const SpaceTag& space);

// ---- bilateral designed shift: orbits pinned above |x_0| along A ----

struct BrWitness {
    OperatorSpec op;
    WitnessCertificate certificate;
};

// Bilateral shift whose negative-side weights make the backward partial
// product equal rho^{dist(i, A)} for A = {n >= 1 : n == residue (mod
// modulus)}. Along A the orbit sup-norm never drops below |x_0| (claimed
// with zero tolerance, sample by sample), capping the visit-density
// parameter at radius 0.99 by 1 - 1/modulus + 0.02.
BrWitness build_br_shift(std::int64_t residue, std::int64_t modulus, double rho,
                         std::int64_t horizon, std::int64_t n_samples, std::uint64_t seed,
                         int threads = 0);

}  // namespace ergolin
