#pragma once

// Irrational circle rotations and fat Cantor subsets of [0,1), computed in
// Q62 fixed point: every endpoint, length, and union measure is an exact
// integer multiple of 2^-62, so bookkeeping identities and monotonicity
// hold without rounding error.

#include <cstdint>
#include <vector>

#include "ergolin/errors.hpp"

namespace ergolin {

inline constexpr std::int64_t kFixedOne = std::int64_t(1) << 62;

struct FixedInterval {
    std::int64_t lo = 0;  // half-open [lo, hi) in units of 2^-62
    std::int64_t hi = 0;
};

struct FatCantorSet {
    std::vector<FixedInterval> removed;   // sorted, disjoint, inside [0, 1)
    int level = 0;                        // construction depth
    std::int64_t measure_fp = kFixedOne;  // exact measure of the surviving set

    double lebesgue_measure() const;  // measure_fp / 2^62
    // Complement of `removed` as a sorted interval list, split at 0.
    std::vector<FixedInterval> set_intervals() const;
    // Longest circular run of the set; the two pieces meeting at 0 join.
    double max_component() const;
    bool contains_fp(std::int64_t x) const;  // x in [0, 2^62)
    bool contains(double x) const;           // x reduced mod 1
    // Swaps the set and the removed union; membership is exactly negated.
    FatCantorSet complement() const;
};

// Builds a set from an explicit removed list (validated sorted, disjoint,
// inside the circle); `level` is recorded as given.
FatCantorSet fat_cantor_from_removed(std::vector<FixedInterval> removed, int level);

// Middle-interval removal with proportions shrinking 4x per level, tuned so
// the surviving measure lands in [target - 2^-depth, target] (removals round
// up, so the measure never exceeds the target); no surviving circular run is
// longer than 2^{1-depth} plus a few units of rounding slack. depth 0 is the
// degenerate full circle. Throws ValidationError when depth exceeds 24 (the
// interval list would outgrow memory) or when the removal budget cannot
// split every component (target extremely close to 0 or 1).
FatCantorSet fat_cantor(double target_measure, int depth);

struct RotationStats {
    double theta = 0.0;
    std::int64_t visits = 0;  // steps n in [1, N] with x0 + n theta mod 1 in C
    std::int64_t steps = 0;
    double frequency = 0.0;   // visits / steps
    double discrepancy = 0.0; // |frequency - lebesgue_measure(C)|
};

// Visit frequency of the rotation orbit to C. theta must not be detectably
// rational: a relation found by rational_dependence({theta}, 50, 1e-9)
// raises DependentAngles.
RotationStats rotation_orbit_stats(double theta, double x0, const FatCantorSet& c,
                                   std::int64_t n_steps);

// m(union_{|n| <= k} (C - n theta)) for k = 0..n_copies, exact and
// nondecreasing (entry 0 is the measure of C itself). Requires
// n_copies * (interval count of C) <= 1e7, else BudgetExceeded.
std::vector<double> escape_union_measure(double theta, const FatCantorSet& c,
                                         std::int64_t n_copies);

}  // namespace ergolin
