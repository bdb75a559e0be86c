#pragma once

// Natural density estimation for visit sets of orbits, and the headline
// quantity: the largest upper density of visits to a bounded ball over
// sampled initial vectors.
//
// For a set S and horizon H the running ratio is r_n = |S cap [1,n]| / n.
// Finite-horizon estimates take the extrema of r_n over the tail window
// n >= ceil(tail_fraction * H): lower_est = min, upper_est = max.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergolin/operators.hpp"
#include "ergolin/rng.hpp"

namespace ergolin {

struct IntegerSet {
    std::vector<std::int64_t> elements;  // strictly increasing, within [1, horizon]
    std::int64_t horizon = 0;

    void validate() const;
};

struct DensityProfile {
    double lower_est = 0.0;
    double upper_est = 0.0;
    std::int64_t tail_start = 1;
    std::vector<double> running_ratio;  // running_ratio[n-1] = r_n
};

inline constexpr double kDefaultTailFraction = 0.1;

DensityProfile density_profile(const IntegerSet& s, double tail_fraction = kDefaultTailFraction);

// {i : ||T^i x0|| <= R} from a visit record.
IntegerSet visit_set(const VisitRecord& rec, double radius);

// {i : lo < ||T^i x0|| <= hi}; the (1,2] annulus drives the obstruction tests.
IntegerSet band_visit_set(const VisitRecord& rec, double lo, double hi);

// Density profile of union_{r=0..N} (S - r), restricted to [1, horizon - N].
DensityProfile shifted_union_density(const IntegerSet& s, std::int64_t N,
                                     double tail_fraction = kDefaultTailFraction);

// Seeded samplers for initial vectors.
struct SamplerSpec {
    enum class Kind { SteinhausSeries, PinnedCoordinate };
    Kind kind = Kind::SteinhausSeries;

    // SteinhausSeries: sum_j chi_j d_j over the given directions, chi_j
    // independent uniform on the unit circle.
    std::vector<SparseVector> directions;

    // PinnedCoordinate: support in [lo, hi], coordinate 0 forced to unit
    // modulus, the rest uniform in the disc of radius `amplitude`.
    std::int64_t lo = -3;
    std::int64_t hi = 3;
    double amplitude = 0.5;

    SparseVector sample(Rng& rng) const;
};

struct CTrialRow {
    std::int64_t trial = 0;
    std::uint64_t seed = 0;
    double radius = 0.0;
    double upper_est = 0.0;
    double lower_est = 0.0;
    bool overflow = false;
};

struct CEstimate {
    double value = 0.0;  // max of upper_est over all (trial, radius)
    std::vector<CTrialRow> per_trial;
    std::vector<double> radii;
    std::int64_t horizon = 0;
};

CEstimate estimate_c(const OperatorSpec& op, const SamplerSpec& sampler,
                     const std::vector<double>& radii, std::int64_t horizon,
                     std::int64_t trials, const SpaceTag& space, std::uint64_t seed,
                     int threads = 0);

// CSV columns: trial, seed, radius, upper_est, lower_est, overflow_flag.
std::string c_estimate_csv(const CEstimate& est);

// Deterministic shortest round-trip formatting used by every CSV writer.
std::string format_double(double x);

}  // namespace ergolin
