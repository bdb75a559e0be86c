#include "ergolin/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ergolin/parallel.hpp"
#include "ergolin/rng.hpp"

namespace ergolin {

namespace {

std::vector<double> flatten(const SparseVector& v, IndexWindow dims) {
    std::vector<double> out;
    out.reserve(2 * static_cast<std::size_t>(dims.hi - dims.lo + 1));
    for (std::int64_t i = dims.lo; i <= dims.hi; ++i) {
        Complex c = v.at(i);
        out.push_back(c.real());
        out.push_back(c.imag());
    }
    return out;
}

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Assignment problem, shortest augmenting paths with potentials, O(n^3).
double hungarian_min_cost(const std::vector<std::vector<double>>& a) {
    int n = static_cast<int>(a.size());
    const double kInf = HUGE_VAL;
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double cost = 0.0;
    for (int j = 1; j <= n; ++j) cost += a[p[j] - 1][j - 1];
    return cost;
}

struct WeightedPoint {
    double x;
    double w;
};

// Exact 1-D transport: integral of |F_mu - F_nu| over the merged support.
double w1_line(std::vector<WeightedPoint> a, std::vector<WeightedPoint> b) {
    auto by_x = [](const WeightedPoint& p, const WeightedPoint& q) { return p.x < q.x; };
    std::sort(a.begin(), a.end(), by_x);
    std::sort(b.begin(), b.end(), by_x);
    double fa = 0.0, fb = 0.0, w1 = 0.0;
    double prev = 0.0;
    bool started = false;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        double x;
        if (i < a.size() && (j >= b.size() || a[i].x <= b[j].x)) {
            x = a[i].x;
        } else {
            x = b[j].x;
        }
        if (started) w1 += std::abs(fa - fb) * (x - prev);
        while (i < a.size() && a[i].x == x) fa += a[i++].w;
        while (j < b.size() && b[j].x == x) fb += b[j++].w;
        prev = x;
        started = true;
    }
    return w1;
}

bool uniform_weights(const EmpiricalMeasure& mu) {
    double expect = 1.0 / static_cast<double>(mu.size());
    for (double w : mu.weights) {
        if (std::abs(w - expect) > 1e-9 * expect) return false;
    }
    return true;
}

// Neumaier-compensated sum: the result does not drift with the term count, so
// normalization checks stay meaningful for six-figure atom counts.
double compensated_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

}  // namespace

void EmpiricalMeasure::validate() const {
    if (atoms.size() != weights.size() || atoms.size() != atom_norms.size()) {
        throw ShapeMismatch("measure component sizes disagree");
    }
    if (atoms.empty()) throw ShapeMismatch("measure needs at least one atom");
    for (double w : weights) {
        if (!(w > 0.0)) throw ValidationError("atom weights must be positive");
    }
    if (std::abs(compensated_sum(weights) - 1.0) > 1e-12) {
        throw ValidationError("atom weights must sum to 1");
    }
    for (const auto& a : atoms) {
        if (!a.empty() && (a.min_index() < window.lo || a.max_index() > window.hi)) {
            throw ValidationError("atom outside the projection window");
        }
    }
}

EmpiricalMeasure measure_from_atoms(std::vector<SparseVector> atoms,
                                    std::vector<double> weights, const SpaceTag& space,
                                    ProjectionWindow window) {
    if (atoms.empty()) throw ShapeMismatch("measure needs at least one atom");
    if (weights.empty()) {
        weights.assign(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    }
    if (atoms.size() != weights.size()) throw ShapeMismatch("atom/weight count mismatch");
    EmpiricalMeasure mu;
    mu.space = space;
    mu.window = window;
    mu.atoms.reserve(atoms.size());
    mu.atom_norms.reserve(atoms.size());
    for (auto& a : atoms) {
        mu.atom_norms.push_back(norm(a, space));
        mu.atoms.push_back(truncate(a, {window.lo, window.hi}, space).kept);
    }
    double sum = compensated_sum(weights);
    if (std::abs(sum - 1.0) > 1e-12) {
        for (double& w : weights) w /= sum;
    }
    mu.weights = std::move(weights);
    mu.validate();
    return mu;
}

EmpiricalMeasure birkhoff_measure(const OperatorSpec& op, const SparseVector& x0,
                                  std::int64_t N, const SpaceTag& space,
                                  ProjectionWindow window) {
    if (N < 1) throw ValidationError("birkhoff average needs N >= 1");
    std::vector<SparseVector> atoms;
    atoms.reserve(static_cast<std::size_t>(N));
    SparseVector cur = x0;
    for (std::int64_t n = 1; n <= N; ++n) {
        cur = apply(op, cur);
        double nn = norm(cur, space);
        if (nn > kNormOverflow) {
            throw OverflowDetected("orbit norm overflow at step " + std::to_string(n));
        }
        atoms.push_back(cur);
    }
    return measure_from_atoms(std::move(atoms), {}, space, window);
}

EmpiricalMeasure dilate(const EmpiricalMeasure& mu, double eta) {
    if (!(eta > 0.0)) throw ValidationError("dilation factor must be positive");
    mu.validate();
    EmpiricalMeasure out = mu;
    for (auto& a : out.atoms) {
        SparseVector scaled;
        for (const auto& [i, c] : a.entries()) scaled.set(i, eta * c);
        a = std::move(scaled);
    }
    for (auto& n : out.atom_norms) n *= eta;
    return out;
}

EmpiricalMeasure convolve(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                          ConvolveMode mode, std::int64_t n, std::uint64_t seed) {
    mu.validate();
    nu.validate();
    if (!(mu.space == nu.space)) throw IncompatibleDomain("convolution across spaces");
    if (mu.window.lo != nu.window.lo || mu.window.hi != nu.window.hi) {
        throw IncompatibleDomain("convolution across projection windows");
    }
    std::size_t product = mu.size() * nu.size();
    constexpr std::size_t kProductCap = 1000000;
    bool full = mode == ConvolveMode::FullProduct ||
                (mode == ConvolveMode::Auto && product <= kProductCap);
    if (mode == ConvolveMode::FullProduct && product > kProductCap) {
        throw ProductTooLarge("full convolution would need " + std::to_string(product) +
                              " atoms");
    }

    std::vector<SparseVector> atoms;
    std::vector<double> weights;
    if (full) {
        // Coinciding sums collapse to one atom (first-occurrence order) so the
        // result is a genuine weighted point measure, e.g. a two-point measure
        // convolved with itself has three atoms, not four.
        using AtomKey = std::vector<std::tuple<std::int64_t, double, double>>;
        std::map<AtomKey, std::size_t> seen;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            for (std::size_t j = 0; j < nu.size(); ++j) {
                SparseVector sum =
                    combine(Complex(1, 0), mu.atoms[i], Complex(1, 0), nu.atoms[j]);
                double w = mu.weights[i] * nu.weights[j];
                AtomKey key;
                key.reserve(sum.support_size());
                for (const auto& [m, c] : sum.entries()) {
                    key.emplace_back(m, c.real(), c.imag());
                }
                auto [it, fresh] = seen.emplace(std::move(key), atoms.size());
                if (fresh) {
                    atoms.push_back(std::move(sum));
                    weights.push_back(w);
                } else {
                    weights[it->second] += w;
                }
            }
        }
    } else {
        if (n < 1) throw ValidationError("subsample size must be >= 1");
        Rng rng(seed);
        atoms.reserve(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k) {
            auto i = static_cast<std::size_t>(
                rng.integer(0, static_cast<std::int64_t>(mu.size()) - 1));
            auto j = static_cast<std::size_t>(
                rng.integer(0, static_cast<std::int64_t>(nu.size()) - 1));
            atoms.push_back(combine(Complex(1, 0), mu.atoms[i], Complex(1, 0), nu.atoms[j]));
        }
        weights.assign(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    }
    return measure_from_atoms(std::move(atoms), std::move(weights), mu.space, mu.window);
}

EmpiricalMeasure pushforward(const OperatorSpec& op, const EmpiricalMeasure& mu) {
    mu.validate();
    std::vector<SparseVector> atoms;
    atoms.reserve(mu.size());
    for (const auto& a : mu.atoms) atoms.push_back(apply(op, a));
    return measure_from_atoms(std::move(atoms), mu.weights, mu.space, mu.window);
}

W1Result wasserstein1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                      IndexWindow dims, TransportMethod method, int n_directions,
                      std::uint64_t seed, int threads) {
    mu.validate();
    nu.validate();
    if (dims.lo > dims.hi) throw ValidationError("empty projection dims");

    std::vector<std::vector<double>> fa(mu.size()), fb(nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) fa[i] = flatten(mu.atoms[i], dims);
    for (std::size_t j = 0; j < nu.size(); ++j) fb[j] = flatten(nu.atoms[j], dims);

    if (method == TransportMethod::ExactAssignment) {
        if (!uniform_weights(mu) || !uniform_weights(nu)) {
            throw ShapeMismatch("exact assignment needs uniform atom weights");
        }
        // Canonical argument order makes the assignment cost matrix identical
        // for (mu, nu) and (nu, mu), so the value is symmetric bitwise.
        if (fb.size() < fa.size() || (fb.size() == fa.size() && fb < fa)) fa.swap(fb);
        std::size_t n = fa.size(), m = fb.size();
        std::size_t L = std::lcm(n, m);
        if (L > kExactAtomCap) {
            throw ShapeMismatch("exact assignment size " + std::to_string(L) +
                                " exceeds cap " + std::to_string(kExactAtomCap));
        }
        std::size_t rn = L / n, rm = L / m;
        std::vector<std::vector<double>> cost(L, std::vector<double>(L));
        for (std::size_t r = 0; r < L; ++r) {
            const auto& x = fa[r / rn];
            for (std::size_t c = 0; c < L; ++c) cost[r][c] = euclid(x, fb[c / rm]);
        }
        return {hungarian_min_cost(cost) / static_cast<double>(L), 0.0};
    }

    if (n_directions < 2) throw ValidationError("sliced transport needs >= 2 directions");
    std::size_t d = fa.empty() ? 0 : fa[0].size();
    std::vector<double> vals(static_cast<std::size_t>(n_directions), 0.0);
    parallel_for_indexed(static_cast<std::size_t>(n_directions), threads, [&](std::size_t k) {
        Rng rng(derive_seed(seed, k));
        std::vector<double> dir(d);
        double nrm = 0.0;
        for (auto& x : dir) {
            x = rng.gaussian();
            nrm += x * x;
        }
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) nrm = 1.0;
        for (auto& x : dir) x /= nrm;
        auto project = [&](const std::vector<std::vector<double>>& f,
                           const std::vector<double>& w) {
            std::vector<WeightedPoint> pts(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) {
                double dot = 0.0;
                for (std::size_t c = 0; c < d; ++c) dot += f[i][c] * dir[c];
                pts[i] = {dot, w[i]};
            }
            return pts;
        };
        vals[k] = w1_line(project(fa, mu.weights), project(fb, nu.weights));
    });
    double mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
                  static_cast<double>(n_directions);
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n_directions) * static_cast<double>(n_directions - 1);
    return {mean, std::sqrt(var)};
}

W1Result invariance_defect(const OperatorSpec& op, const EmpiricalMeasure& mu,
                           IndexWindow dims, TransportMethod method, int n_directions,
                           std::uint64_t seed, int threads) {
    return wasserstein1(mu, pushforward(op, mu), dims, method, n_directions, seed, threads);
}

MarkovReport markov_tail_check(const EmpiricalMeasure& mu, double p, double alpha) {
    mu.validate();
    if (!(p > 0.0)) throw ValidationError("markov check needs p > 0");
    if (!(alpha > 0.0)) throw ValidationError("markov check needs alpha > 0");
    double lhs = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu.atom_norms[i] > alpha) lhs += mu.weights[i];
        moment += mu.weights[i] * std::pow(mu.atom_norms[i], p);
    }
    double rhs = std::pow(alpha, -p) * moment;
    return {lhs, rhs, lhs <= rhs + 1e-12};
}

double support_coverage(const EmpiricalMeasure& mu, const std::vector<CoverageBall>& balls) {
    mu.validate();
    if (balls.empty()) throw ValidationError("coverage needs at least one ball");
    IndexWindow dims{mu.window.lo, mu.window.hi};
    std::vector<std::vector<double>> fa(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) fa[i] = flatten(mu.atoms[i], dims);
    std::size_t covered = 0;
    for (const auto& ball : balls) {
        std::vector<double> c = flatten(ball.center, dims);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (euclid(fa[i], c) <= ball.radius) {
                ++covered;
                break;
            }
        }
    }
    return static_cast<double>(covered) / static_cast<double>(balls.size());
}

bool measure_multiset_equal(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    if (mu.size() != nu.size()) return false;
    using Key = std::pair<std::vector<std::tuple<std::int64_t, double, double>>, double>;
    auto keys = [](const EmpiricalMeasure& m) {
        std::vector<Key> ks;
        ks.reserve(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            Key k;
            for (const auto& [idx, c] : m.atoms[i].entries()) {
                k.first.emplace_back(idx, c.real(), c.imag());
            }
            k.second = m.weights[i];
            ks.push_back(std::move(k));
        }
        std::sort(ks.begin(), ks.end());
        return ks;
    };
    return keys(mu) == keys(nu);
}

json measure_to_json(const EmpiricalMeasure& mu) {
    json atoms = json::array();
    for (const auto& a : mu.atoms) atoms.push_back(vector_to_json(a, mu.space));
    json j;
    j["atoms"] = std::move(atoms);
    j["weights"] = mu.weights;
    j["atom_norms"] = mu.atom_norms;
    j["window"] = {{"lo", mu.window.lo}, {"hi", mu.window.hi}};
    return j;
}

EmpiricalMeasure measure_from_json(const json& j) {
    EmpiricalMeasure mu;
    for (const auto& a : j.at("atoms")) {
        auto [v, space] = vector_from_json(a);
        mu.atoms.push_back(std::move(v));
        mu.space = space;
    }
    mu.weights = j.at("weights").get<std::vector<double>>();
    mu.atom_norms = j.at("atom_norms").get<std::vector<double>>();
    mu.window.lo = j.at("window").at("lo").get<std::int64_t>();
    mu.window.hi = j.at("window").at("hi").get<std::int64_t>();
    mu.validate();
    return mu;
}

}  // namespace ergolin
