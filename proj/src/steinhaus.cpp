#include "ergolin/steinhaus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "ergolin/parallel.hpp"
#include "ergolin/rng.hpp"

namespace ergolin {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double c0_norm(const SparseVector& v) {
    double m = 0.0;
    for (const auto& [i, c] : v.entries()) m = std::max(m, std::abs(c));
    return m;
}

void check_residuals(const std::vector<EigenvectorData>& eigvecs) {
    for (const auto& e : eigvecs) {
        double scale = std::max(c0_norm(e.vector), 1e-300);
        if (e.residual > kEigenResidualTol * scale) {
            throw ResidualTooLarge("eigenvector residual " + std::to_string(e.residual) +
                                   " exceeds the admissible relative tolerance");
        }
    }
}

// Guard asserted by the periodic constructions: the defect of the windowed
// measure is controlled by the measured return residuals plus whatever mass
// sits on the window's inflow edge (shifting drags it across the boundary).
void assert_invariance(const OperatorSpec& op, const EmpiricalMeasure& nu,
                       double return_sum, std::int64_t period) {
    if (nu.size() > 16384) return;  // larger measures defer to the caller
    double dim = 2.0 * static_cast<double>(nu.window.hi - nu.window.lo + 1);
    double edge = 0.0, scale = 0.0;
    for (std::size_t t = 0; t < nu.size(); ++t) {
        edge += std::abs(nu.atoms[t].at(nu.window.hi));
        scale += nu.atom_norms[t];
    }
    edge /= static_cast<double>(nu.size());
    scale /= static_cast<double>(nu.size());
    double budget = 2.0 * std::sqrt(dim) * return_sum / static_cast<double>(period) + edge +
                    1e-12 * (1.0 + scale);
    IndexWindow dims{nu.window.lo, nu.window.hi};
    W1Result defect = nu.size() <= kExactAtomCap
                          ? invariance_defect(op, nu, dims, TransportMethod::ExactAssignment)
                          : invariance_defect(op, nu, dims, TransportMethod::Sliced, 32, 7);
    if (defect.value > budget) {
        throw Error("periodic construction failed its invariance check: defect " +
                    std::to_string(defect.value) + " > budget " + std::to_string(budget));
    }
}

}  // namespace

Complex unit_phase(double angle) {
    double q = angle * 4.0;
    if (q == std::floor(q) && std::abs(q) < 4.0e18) {
        static const Complex quarter[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        auto k = static_cast<std::int64_t>(std::llround(q)) % 4;
        return quarter[(k + 4) % 4];
    }
    double a = 2.0 * kPi * angle;
    return {std::cos(a), std::sin(a)};
}

std::optional<std::int64_t> detect_angle_order(double angle, std::int64_t max_den, double tol) {
    for (std::int64_t q = 1; q <= max_den; ++q) {
        double t = angle * static_cast<double>(q);
        if (std::abs(t - std::round(t)) <= tol) return q;
    }
    return std::nullopt;
}

EigenvectorData eigen_from_shift(const OperatorSpec& op, double angle, std::int64_t trunc) {
    EigenField f = eigenvector_field(op, unit_phase(angle), trunc);
    EigenvectorData out;
    out.vector = std::move(f.vector);
    out.angle = angle;
    out.residual = f.residual;
    out.order = detect_angle_order(angle);
    return out;
}

EigenvectorData eigen_from_block(const OperatorSpec& op, std::size_t k) {
    if (op.variant != OperatorSpec::Variant::BlockDiag) {
        throw ValidationError("block eigenvector needs a diagonal rotation operator");
    }
    if (k >= op.angles.size()) throw ValidationError("block index out of range");
    EigenvectorData out;
    out.vector = SparseVector::unit(static_cast<std::int64_t>(k));
    out.angle = op.angles[k];
    Complex lambda = op.block_phase(k);
    SparseVector diff = combine(Complex(1, 0), apply(op, out.vector), -lambda, out.vector);
    out.residual = c0_norm(diff);
    out.order = detect_angle_order(out.angle);
    return out;
}

std::int64_t common_period(const std::vector<EigenvectorData>& eigvecs) {
    if (eigvecs.empty()) throw ValidationError("common period of an empty family");
    std::int64_t acc = 1;
    for (const auto& e : eigvecs) {
        if (!e.order) throw NotCommonPeriod("an eigenvalue angle has no finite order");
        acc = std::lcm(acc, *e.order);
        if (acc > 1000000000) throw NotCommonPeriod("common period exceeds 1e9");
    }
    return acc;
}

EmpiricalMeasure sample_steinhaus(const std::vector<EigenvectorData>& eigvecs,
                                  std::int64_t n_samples, const SpaceTag& space,
                                  std::uint64_t seed, ProjectionWindow window) {
    if (eigvecs.empty()) throw ValidationError("sampling needs at least one eigenvector");
    if (n_samples < 1 || n_samples > 1000000) {
        throw ValidationError("sample count must lie in [1, 1e6]");
    }
    check_residuals(eigvecs);
    Rng rng(seed);
    std::vector<SparseVector> atoms;
    atoms.reserve(static_cast<std::size_t>(n_samples));
    std::map<std::int64_t, Complex> acc;
    for (std::int64_t s = 0; s < n_samples; ++s) {
        acc.clear();
        for (const auto& e : eigvecs) {
            Complex chi = rng.unit_circle();
            for (const auto& [m, c] : e.vector.entries()) acc[m] += chi * c;
        }
        SparseVector y;
        for (const auto& [m, c] : acc) y.set(m, c);
        atoms.push_back(std::move(y));
    }
    return measure_from_atoms(std::move(atoms), {}, space, window);
}

EmpiricalMeasure periodic_measure(const OperatorSpec& op, const SparseVector& a,
                                  std::int64_t N, const SpaceTag& space,
                                  ProjectionWindow window) {
    if (N < 1) throw ValidationError("period must be >= 1");
    std::vector<SparseVector> atoms;
    atoms.reserve(static_cast<std::size_t>(N));
    SparseVector cur = a;
    for (std::int64_t t = 0; t < N; ++t) {
        atoms.push_back(cur);
        cur = apply(op, cur);
    }
    double ret = c0_norm(combine(Complex(1, 0), cur, Complex(-1, 0), a));
    double scale = std::max(c0_norm(a), 1e-300);
    if (ret > kReturnResidualTol * scale) {
        throw NotPeriodic("measured return residual " + std::to_string(ret) +
                          " exceeds the admissible relative tolerance");
    }
    EmpiricalMeasure nu = measure_from_atoms(std::move(atoms), {}, space, window);
    assert_invariance(op, nu, ret, N);
    return nu;
}

EmpiricalMeasure periodic_approximation(const OperatorSpec& op,
                                        const std::vector<EigenvectorData>& eigvecs,
                                        const std::vector<double>& free_angles, std::int64_t Q,
                                        std::int64_t N, const SpaceTag& space,
                                        ProjectionWindow window, int threads) {
    if (eigvecs.empty()) throw ValidationError("approximation needs at least one eigenvector");
    if (eigvecs.size() != free_angles.size()) {
        throw ValidationError("one free angle per eigenvector required");
    }
    if (Q < 1 || N < 1) throw ValidationError("Q and N must be >= 1");
    check_residuals(eigvecs);

    double return_sum = 0.0;
    for (const auto& e : eigvecs) {
        SparseVector cur = e.vector;
        for (std::int64_t t = 0; t < Q; ++t) cur = apply(op, cur);
        double ret = c0_norm(combine(Complex(1, 0), cur, Complex(-1, 0), e.vector));
        double scale = std::max(c0_norm(e.vector), 1e-300);
        if (ret > kReturnResidualTol * scale) {
            throw NotCommonPeriod("an eigenvector does not return after Q steps: residual " +
                                  std::to_string(ret));
        }
        return_sum += ret;
    }
    if (auto dep = rational_dependence(free_angles, 20, 1e-9)) {
        throw DependentAngles("free angles admit an integer relation with deviation " +
                              std::to_string(dep->deviation));
    }

    const auto s = eigvecs.size();
    double total_d = std::pow(static_cast<double>(N), static_cast<double>(s)) *
                     static_cast<double>(Q);
    if (total_d > 1000000.0) {
        throw TooManyAtoms("approximation would need " + std::to_string(total_d) + " atoms");
    }
    std::size_t tuples = 1;
    for (std::size_t j = 0; j < s; ++j) tuples *= static_cast<std::size_t>(N);
    std::size_t total = tuples * static_cast<std::size_t>(Q);

    // Phase power tables, renormalized every 64 steps to pin |lambda^n| at 1.
    std::vector<std::vector<Complex>> pow_table(s);
    for (std::size_t j = 0; j < s; ++j) {
        pow_table[j].resize(static_cast<std::size_t>(N));
        Complex lambda = unit_phase(free_angles[j]);
        Complex c(1.0, 0.0);
        for (std::int64_t n = 0; n < N; ++n) {
            if (n > 0) c *= lambda;
            if (n > 0 && n % 64 == 0) c /= std::abs(c);
            pow_table[j][static_cast<std::size_t>(n)] = c;
        }
    }

    std::vector<SparseVector> atoms(total);
    parallel_for_indexed(tuples, threads, [&](std::size_t t) {
        std::map<std::int64_t, Complex> acc;
        std::size_t rem = t;
        // tuple-major: the first eigenvector's phase index varies slowest
        for (std::size_t j = s; j-- > 0;) {
            std::size_t n = rem % static_cast<std::size_t>(N);
            rem /= static_cast<std::size_t>(N);
            Complex f = pow_table[j][n];
            for (const auto& [m, c] : eigvecs[j].vector.entries()) acc[m] += f * c;
        }
        SparseVector y;
        for (const auto& [m, c] : acc) y.set(m, c);
        for (std::int64_t q = 0; q < Q; ++q) {
            atoms[t * static_cast<std::size_t>(Q) + static_cast<std::size_t>(q)] = y;
            if (q + 1 < Q) y = apply(op, y);
        }
    });

    EmpiricalMeasure nu = measure_from_atoms(std::move(atoms), {}, space, window);
    assert_invariance(op, nu, return_sum, Q);
    return nu;
}

json kronecker_to_json(const KroneckerResult& r) {
    return json{{"n", r.n}, {"max_deviation", r.max_deviation}, {"scanned", r.scanned}};
}

KroneckerResult kronecker_search(const std::vector<double>& angles,
                                 const std::vector<Complex>& targets, double eps,
                                 std::int64_t max_n) {
    if (angles.empty() || angles.size() != targets.size()) {
        throw ValidationError("one unimodular target per angle required");
    }
    if (!(eps > 0.0)) throw ValidationError("eps must be positive");
    if (max_n < 1) throw ValidationError("max_n must be >= 1");
    for (const auto& t : targets) {
        if (std::abs(std::abs(t) - 1.0) > 1e-9) {
            throw ValidationError("targets must lie on the unit circle");
        }
    }
    double best = HUGE_VAL;
    std::int64_t best_n = 0;
    for (std::int64_t n = 1; n <= max_n; ++n) {
        double dev = 0.0;
        for (std::size_t k = 0; k < angles.size(); ++k) {
            double x = angles[k] * static_cast<double>(n);
            x -= std::floor(x);
            dev = std::max(dev, std::abs(unit_phase(x) - targets[k]));
        }
        if (dev < best) {
            best = dev;
            best_n = n;
        }
        if (dev < eps) return {n, dev, n};
    }
    throw NotFound("no power up to " + std::to_string(max_n) + " lands within " +
                   std::to_string(eps) + "; best deviation " + std::to_string(best) +
                   " at n = " + std::to_string(best_n));
}

std::optional<DependenceCertificate> rational_dependence(const std::vector<double>& angles,
                                                         std::int64_t max_coeff, double tol) {
    const auto s = angles.size();
    if (s < 1) throw ValidationError("dependence scan needs at least one angle");
    if (max_coeff < 1) throw ValidationError("max coefficient must be >= 1");
    if (!(tol >= 0.0)) throw ValidationError("tolerance must be nonnegative");
    if (static_cast<double>(s) * static_cast<double>(max_coeff) > 1e7 ||
        std::pow(2.0 * static_cast<double>(max_coeff) + 1.0, static_cast<double>(s)) > 4e7) {
        throw BudgetExceeded("dependence enumeration budget exceeded");
    }

    std::vector<std::int64_t> m(s, 0);
    std::optional<DependenceCertificate> found;
    // Rings of constant max-norm r, lexicographic within a ring, canonical
    // sign only (first nonzero coefficient positive).
    std::function<void(std::size_t, std::int64_t, bool, bool)> descend =
        [&](std::size_t k, std::int64_t r, bool lead, bool hit) {
            if (found) return;
            if (k == s) {
                if (!lead || !hit) return;  // all-zero or interior point
                double x = 0.0;
                for (std::size_t j = 0; j < s; ++j) {
                    x += static_cast<double>(m[j]) * angles[j];
                }
                double dev = std::abs(x - std::round(x));
                if (dev <= tol) found = DependenceCertificate{m, dev};
                return;
            }
            std::int64_t lo = lead ? -r : 0;
            for (std::int64_t v = lo; v <= r && !found; ++v) {
                m[k] = v;
                descend(k + 1, r, lead || v != 0, hit || v == r || v == -r);
            }
            m[k] = 0;
        };
    for (std::int64_t r = 1; r <= max_coeff && !found; ++r) descend(0, r, false, false);
    return found;
}

}  // namespace ergolin
