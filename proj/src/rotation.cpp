#include "ergolin/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ergolin/steinhaus.hpp"

namespace ergolin {

namespace {

constexpr double kInvOne = 1.0 / static_cast<double>(kFixedOne);

std::int64_t reduce_fp(double x) {
    double frac = x - std::floor(x);
    return std::llround(frac * static_cast<double>(kFixedOne)) % kFixedOne;
}

}  // namespace

double FatCantorSet::lebesgue_measure() const {
    return static_cast<double>(measure_fp) * kInvOne;
}

std::vector<FixedInterval> FatCantorSet::set_intervals() const {
    std::vector<FixedInterval> out;
    std::int64_t prev = 0;
    for (const auto& r : removed) {
        if (r.lo > prev) out.push_back({prev, r.lo});
        prev = r.hi;
    }
    if (prev < kFixedOne) out.push_back({prev, kFixedOne});
    return out;
}

double FatCantorSet::max_component() const {
    std::vector<FixedInterval> set = set_intervals();
    if (set.empty()) return 0.0;
    if (removed.empty()) return 1.0;
    std::int64_t best = 0;
    std::size_t n = set.size();
    bool wrap = n >= 2 && set.front().lo == 0 && set.back().hi == kFixedOne;
    for (std::size_t k = 0; k < n; ++k) {
        std::int64_t len = set[k].hi - set[k].lo;
        if (wrap && k == 0) continue;  // folded into the wrap run below
        if (wrap && k == n - 1) len += set.front().hi - set.front().lo;
        best = std::max(best, len);
    }
    return static_cast<double>(best) * kInvOne;
}

bool FatCantorSet::contains_fp(std::int64_t x) const {
    auto it = std::upper_bound(removed.begin(), removed.end(), x,
                               [](std::int64_t v, const FixedInterval& r) { return v < r.lo; });
    if (it == removed.begin()) return true;
    return x >= std::prev(it)->hi;
}

bool FatCantorSet::contains(double x) const { return contains_fp(reduce_fp(x)); }

FatCantorSet FatCantorSet::complement() const {
    FatCantorSet out;
    out.removed = set_intervals();
    out.level = level;
    out.measure_fp = kFixedOne - measure_fp;
    return out;
}

FatCantorSet fat_cantor_from_removed(std::vector<FixedInterval> removed, int level) {
    std::int64_t prev = 0;
    std::int64_t total = 0;
    for (const auto& r : removed) {
        if (r.lo < prev || r.hi <= r.lo || r.hi > kFixedOne) {
            throw ValidationError("removed intervals must be sorted, disjoint, inside [0,1)");
        }
        prev = r.hi;
        total += r.hi - r.lo;
    }
    FatCantorSet out;
    out.removed = std::move(removed);
    out.level = level;
    out.measure_fp = kFixedOne - total;
    return out;
}

FatCantorSet fat_cantor(double target_measure, int depth) {
    if (!(target_measure > 0.0 && target_measure < 1.0)) {
        throw ValidationError("target measure must lie in (0, 1)");
    }
    if (depth < 0 || depth > 24) {
        throw ValidationError("depth must lie in [0, 24]; deeper sets would materialize "
                              "more than ~16M intervals");
    }
    FatCantorSet out;
    out.level = depth;
    if (depth == 0) return out;  // degenerate: the full circle

    auto target_fp =
        static_cast<std::int64_t>(std::floor(target_measure * static_cast<double>(kFixedOne)));
    if (target_fp < 1) throw ValidationError("target measure is below one 2^-62 unit");
    std::int64_t budget = kFixedOne - target_fp;
    // per-level removal c / 2^{2k-1} from each of 2^{k-1} components sums
    // to c (1 - 2^-depth); c is sized so the sum exhausts the budget
    std::int64_t c_fp = static_cast<std::int64_t>(
        (static_cast<unsigned __int128>(budget) << depth) /
        static_cast<unsigned __int128>((std::int64_t(1) << depth) - 1));

    std::vector<FixedInterval> comps{{0, kFixedOne}};
    std::vector<FixedInterval> removed;
    std::int64_t removed_total = 0;
    for (int k = 1; k <= depth; ++k) {
        int shift = 2 * k - 1;
        auto ell = static_cast<std::int64_t>(
            (static_cast<unsigned __int128>(c_fp) + (std::int64_t(1) << shift) - 1) >> shift);
        if (ell < 1) {
            throw ValidationError("removal budget too small to split every component; "
                                  "lower the depth or the target measure");
        }
        std::vector<FixedInterval> next;
        next.reserve(comps.size() * 2);
        for (const auto& comp : comps) {
            std::int64_t len = comp.hi - comp.lo;
            if (ell >= len) {
                throw ValidationError("removal would swallow a whole component; lower the "
                                      "depth or raise the target measure");
            }
            std::int64_t m1 = comp.lo + (len - ell) / 2;
            removed.push_back({m1, m1 + ell});
            removed_total += ell;
            next.push_back({comp.lo, m1});
            next.push_back({m1 + ell, comp.hi});
        }
        comps.swap(next);
    }
    std::sort(removed.begin(), removed.end(),
              [](const FixedInterval& a, const FixedInterval& b) { return a.lo < b.lo; });
    out.removed = std::move(removed);
    out.measure_fp = kFixedOne - removed_total;

    // post: measure in [target - 2^-depth, target], components no longer
    // than 2^{1-depth} plus rounding slack
    if (out.measure_fp > target_fp || target_fp - out.measure_fp > (kFixedOne >> depth)) {
        throw Error("internal: surviving measure drifted out of tolerance");
    }
    std::int64_t comp_bound = 2 * ((kFixedOne >> depth) + 2 * depth + 2);
    if (out.max_component() > static_cast<double>(comp_bound) * kInvOne) {
        throw Error("internal: a surviving component exceeds the nowhere-dense bound");
    }
    return out;
}

RotationStats rotation_orbit_stats(double theta, double x0, const FatCantorSet& c,
                                   std::int64_t n_steps) {
    if (!(x0 >= 0.0 && x0 < 1.0)) throw ValidationError("x0 must lie in [0, 1)");
    if (n_steps < 1) throw ValidationError("need at least one step");
    if (auto rel = rational_dependence({theta}, 50, 1e-9)) {
        throw DependentAngles("rotation angle is rational within 1e-9: " +
                              std::to_string(rel->m[0]) + " theta is an integer");
    }
    std::int64_t th = reduce_fp(theta);
    std::int64_t x = reduce_fp(x0);
    RotationStats stats;
    stats.theta = theta;
    stats.steps = n_steps;
    for (std::int64_t n = 0; n < n_steps; ++n) {
        x += th;
        if (x >= kFixedOne) x -= kFixedOne;
        if (c.contains_fp(x)) ++stats.visits;
    }
    stats.frequency =
        static_cast<double>(stats.visits) / static_cast<double>(stats.steps);
    stats.discrepancy = std::abs(stats.frequency - c.lebesgue_measure());
    return stats;
}

std::vector<double> escape_union_measure(double theta, const FatCantorSet& c,
                                         std::int64_t n_copies) {
    if (n_copies < 0) throw ValidationError("copy count must be >= 0");
    std::vector<FixedInterval> base = c.set_intervals();
    if (base.empty()) return std::vector<double>(static_cast<std::size_t>(n_copies) + 1, 0.0);
    if (n_copies * static_cast<std::int64_t>(base.size()) > 10'000'000) {
        throw BudgetExceeded("escape union needs n_copies * intervals <= 1e7");
    }

    std::map<std::int64_t, std::int64_t> cover;  // lo -> hi, disjoint, merged
    std::int64_t total = 0;
    auto insert_interval = [&](std::int64_t lo, std::int64_t hi) {
        if (lo >= hi) return;
        auto it = cover.lower_bound(lo);
        if (it != cover.begin() && std::prev(it)->second >= lo) --it;
        while (it != cover.end() && it->first <= hi) {
            lo = std::min(lo, it->first);
            hi = std::max(hi, it->second);
            total -= it->second - it->first;
            it = cover.erase(it);
        }
        cover.emplace(lo, hi);
        total += hi - lo;
    };
    auto add_copy = [&](std::int64_t delta) {
        for (const auto& s : base) {
            std::int64_t lo = s.lo + delta;
            if (lo >= kFixedOne) lo -= kFixedOne;
            std::int64_t len = s.hi - s.lo;
            if (lo + len <= kFixedOne) {
                insert_interval(lo, lo + len);
            } else {
                insert_interval(lo, kFixedOne);
                insert_interval(0, lo + len - kFixedOne);
            }
        }
    };

    std::int64_t th = reduce_fp(theta);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_copies) + 1);
    add_copy(0);
    out.push_back(static_cast<double>(total) * kInvOne);
    std::int64_t fwd = 0;
    for (std::int64_t k = 1; k <= n_copies; ++k) {
        fwd += th;
        if (fwd >= kFixedOne) fwd -= kFixedOne;
        add_copy(fwd);                                   // n = -k: C + k theta
        add_copy(fwd == 0 ? 0 : kFixedOne - fwd);        // n = +k: C - k theta
        out.push_back(static_cast<double>(total) * kInvOne);
    }
    return out;
}

}  // namespace ergolin
