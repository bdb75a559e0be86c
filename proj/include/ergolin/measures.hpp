#pragma once

// Finitely supported empirical measures on the sequence space, with the
// operations used to compare orbit statistics against candidate invariant
// laws: Cesaro averages along orbits, dilation, convolution, pushforward,
// and a Wasserstein-1 distance on a fixed projection window.
//
// Atoms are stored truncated to the projection window; the full-space norm
// of each atom is kept as metadata so tail checks remain possible.

#include <cstdint>
#include <string>
#include <vector>

#include "ergolin/operators.hpp"

namespace ergolin {

struct ProjectionWindow {
    std::int64_t lo = -8;
    std::int64_t hi = 8;  // inclusive
    bool contains(std::int64_t i) const { return i >= lo && i <= hi; }
    std::int64_t size() const { return hi - lo + 1; }
};

struct EmpiricalMeasure {
    std::vector<SparseVector> atoms;   // truncated to `window`
    std::vector<double> weights;       // positive, sum within 1e-12 of 1
    std::vector<double> atom_norms;    // full-vector norms before truncation
    SpaceTag space;
    ProjectionWindow window;

    std::size_t size() const { return atoms.size(); }
    void validate() const;
};

EmpiricalMeasure measure_from_atoms(std::vector<SparseVector> atoms,
                                    std::vector<double> weights, const SpaceTag& space,
                                    ProjectionWindow window = {});

// mu_N = (1/N) sum_{n=1..N} delta_{T^n x0}.
EmpiricalMeasure birkhoff_measure(const OperatorSpec& op, const SparseVector& x0,
                                  std::int64_t N, const SpaceTag& space,
                                  ProjectionWindow window = {});

// Image of the measure under x -> eta x (eta > 0).
EmpiricalMeasure dilate(const EmpiricalMeasure& mu, double eta);

enum class ConvolveMode { FullProduct, Subsample, Auto };

// Convolution: atoms x + y with weights w_x * w_y. FullProduct refuses more
// than 1e6 product atoms; Auto switches to subsampling (n = 1e5) above that.
EmpiricalMeasure convolve(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                          ConvolveMode mode = ConvolveMode::Auto, std::int64_t n = 100000,
                          std::uint64_t seed = 0);

EmpiricalMeasure pushforward(const OperatorSpec& op, const EmpiricalMeasure& mu);

struct W1Result {
    double value = 0.0;
    double std_error = 0.0;  // 0 for the exact method
};

enum class TransportMethod { ExactAssignment, Sliced };

inline constexpr std::size_t kExactAtomCap = 1024;
inline constexpr int kDefaultSlicedDirections = 256;

// Wasserstein-1 between the window projections (flattened to real pairs).
// ExactAssignment needs uniform weights; unequal atom counts are replicated
// to their lcm (<= kExactAtomCap), then solved by the Hungarian method.
// Sliced averages 1-D transport over seeded random directions and reports
// the standard error of the mean.
W1Result wasserstein1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                      IndexWindow dims, TransportMethod method,
                      int n_directions = kDefaultSlicedDirections, std::uint64_t seed = 1,
                      int threads = 0);

W1Result invariance_defect(const OperatorSpec& op, const EmpiricalMeasure& mu,
                           IndexWindow dims, TransportMethod method,
                           int n_directions = kDefaultSlicedDirections,
                           std::uint64_t seed = 1, int threads = 0);

struct MarkovReport {
    double lhs;  // mass of atoms with norm > alpha
    double rhs;  // alpha^{-p} * sum_i w_i ||atom_i||^p
    bool pass;   // lhs <= rhs (+1e-12 slack for roundoff)
};

// Chebyshev/Markov tail inequality on the atom norms (full norms, metadata).
MarkovReport markov_tail_check(const EmpiricalMeasure& mu, double p, double alpha);

struct CoverageBall {
    SparseVector center;
    double radius;
};

// Fraction of reference balls that carry positive mass (window metric).
double support_coverage(const EmpiricalMeasure& mu, const std::vector<CoverageBall>& balls);

// Exact multiset comparison of (atom, weight) pairs after sorting.
bool measure_multiset_equal(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

json measure_to_json(const EmpiricalMeasure& mu);
EmpiricalMeasure measure_from_json(const json& j);

}  // namespace ergolin
