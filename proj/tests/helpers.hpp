#pragma once

// Shared test utilities. Reference implementations here are deliberately
// naive (apply chains, permutation enumeration, direct summation) so they
// exercise none of the code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ergolin/measures.hpp"
#include "ergolin/operators.hpp"
#include "ergolin/rng.hpp"
#include "ergolin/space.hpp"

namespace testutil {

using namespace ergolin;

inline SparseVector random_vector(Rng& rng, std::int64_t lo, std::int64_t hi,
                                  int max_entries) {
    SparseVector v;
    int n = static_cast<int>(rng.integer(1, max_entries));
    for (int k = 0; k < n; ++k) {
        std::int64_t idx = rng.integer(lo, hi);
        v.set(idx, Complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)));
    }
    return v;
}

struct SlowOrbit {
    std::vector<double> norms;
    std::vector<std::vector<Complex>> tracked;
};

// Reference orbit: literal apply() chain, one full vector per step.
inline SlowOrbit slow_orbit(const OperatorSpec& op, const SparseVector& x0,
                            std::int64_t horizon, const SpaceTag& space,
                            const std::vector<std::int64_t>& tracked_coords = {}) {
    SlowOrbit out;
    out.tracked.assign(tracked_coords.size(), {});
    SparseVector cur = x0;
    for (std::int64_t i = 1; i <= horizon; ++i) {
        cur = apply(op, cur);
        out.norms.push_back(norm(cur, space));
        for (std::size_t j = 0; j < tracked_coords.size(); ++j) {
            out.tracked[j].push_back(cur.at(tracked_coords[j]));
        }
    }
    return out;
}

// Euclidean distance between window projections flattened to (re, im) pairs.
inline double projected_distance(const SparseVector& a, const SparseVector& b,
                                 IndexWindow dims) {
    double acc = 0.0;
    for (std::int64_t i = dims.lo; i <= dims.hi; ++i) {
        Complex d = a.at(i) - b.at(i);
        acc += d.real() * d.real() + d.imag() * d.imag();
    }
    return std::sqrt(acc);
}

// Brute-force W1 between uniform measures: replicate both atom lists to a
// common size, then take the cheapest of all permutations. Only usable for
// lcm(|mu|, |nu|) <= 8.
inline double brute_force_w1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                             IndexWindow dims) {
    auto replicate = [](const std::vector<SparseVector>& atoms, std::size_t len) {
        std::vector<SparseVector> out;
        std::size_t rep = len / atoms.size();
        for (const auto& a : atoms) {
            for (std::size_t r = 0; r < rep; ++r) out.push_back(a);
        }
        return out;
    };
    std::size_t l = std::lcm(mu.size(), nu.size());
    std::vector<SparseVector> xs = replicate(mu.atoms, l);
    std::vector<SparseVector> ys = replicate(nu.atoms, l);
    std::vector<std::size_t> perm(l);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = HUGE_VAL;
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
            cost += projected_distance(xs[i], ys[perm[i]], dims);
        }
        best = std::min(best, cost / static_cast<double>(l));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline bool rel_close(double a, double b, double tol) {
    double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) <= tol * scale;
}

inline EmpiricalMeasure uniform_measure(std::vector<SparseVector> atoms,
                                        const SpaceTag& space,
                                        ProjectionWindow window = {}) {
    std::vector<double> w(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    return measure_from_atoms(std::move(atoms), std::move(w), space, window);
}

}  // namespace testutil
