#include "ergolin/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ergolin/parallel.hpp"

namespace ergolin {

void IntegerSet::validate() const {
    if (horizon < 1) throw HorizonTooShort("integer set horizon must be >= 1");
    std::int64_t prev = 0;
    for (std::int64_t e : elements) {
        if (e <= prev) throw ValidationError("integer set must be strictly increasing and >= 1");
        if (e > horizon) throw ValidationError("integer set element beyond horizon");
        prev = e;
    }
}

DensityProfile density_profile(const IntegerSet& s, double tail_fraction) {
    s.validate();
    if (s.horizon < 10) throw HorizonTooShort("density profile needs horizon >= 10");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw ValidationError("tail_fraction must lie in (0,1]");
    }
    DensityProfile p;
    p.running_ratio.resize(static_cast<std::size_t>(s.horizon));
    std::size_t k = 0;
    std::int64_t count = 0;
    for (std::int64_t n = 1; n <= s.horizon; ++n) {
        while (k < s.elements.size() && s.elements[k] == n) {
            ++count;
            ++k;
        }
        p.running_ratio[static_cast<std::size_t>(n - 1)] =
            static_cast<double>(count) / static_cast<double>(n);
    }
    p.tail_start = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(tail_fraction * static_cast<double>(s.horizon))));
    double lo = 1.0, hi = 0.0;
    for (std::int64_t n = p.tail_start; n <= s.horizon; ++n) {
        double r = p.running_ratio[static_cast<std::size_t>(n - 1)];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    p.lower_est = lo;
    p.upper_est = hi;
    return p;
}

IntegerSet visit_set(const VisitRecord& rec, double radius) {
    IntegerSet s;
    s.horizon = static_cast<std::int64_t>(rec.norms.size());
    if (s.horizon == 0) throw HorizonTooShort("empty visit record");
    for (std::int64_t i = 1; i <= s.horizon; ++i) {
        if (rec.norms[static_cast<std::size_t>(i - 1)] <= radius) s.elements.push_back(i);
    }
    return s;
}

IntegerSet band_visit_set(const VisitRecord& rec, double lo, double hi) {
    IntegerSet s;
    s.horizon = static_cast<std::int64_t>(rec.norms.size());
    if (s.horizon == 0) throw HorizonTooShort("empty visit record");
    for (std::int64_t i = 1; i <= s.horizon; ++i) {
        double n = rec.norms[static_cast<std::size_t>(i - 1)];
        if (n > lo && n <= hi) s.elements.push_back(i);
    }
    return s;
}

DensityProfile shifted_union_density(const IntegerSet& s, std::int64_t N, double tail_fraction) {
    s.validate();
    if (N < 0) throw ValidationError("shift count must be >= 0");
    if (s.horizon - N < 10) throw HorizonTooShort("horizon too short after shifting");
    // n belongs to the union iff some element of S lies in [n, n + N].
    IntegerSet u;
    u.horizon = s.horizon - N;
    std::size_t k = 0;
    for (std::int64_t n = 1; n <= u.horizon; ++n) {
        while (k < s.elements.size() && s.elements[k] < n) ++k;
        if (k < s.elements.size() && s.elements[k] <= n + N) u.elements.push_back(n);
    }
    return density_profile(u, tail_fraction);
}

SparseVector SamplerSpec::sample(Rng& rng) const {
    SparseVector v;
    switch (kind) {
        case Kind::SteinhausSeries: {
            for (const auto& d : directions) {
                Complex chi = rng.unit_circle();
                for (const auto& [i, c] : d.entries()) v.add(i, chi * c);
            }
            break;
        }
        case Kind::PinnedCoordinate: {
            for (std::int64_t i = lo; i <= hi; ++i) {
                if (i == 0) continue;
                double r = amplitude * std::sqrt(rng.uniform());
                v.set(i, r * rng.unit_circle());
            }
            v.set(0, rng.unit_circle());  // |x_0| = 1
            break;
        }
    }
    return v;
}

CEstimate estimate_c(const OperatorSpec& op, const SamplerSpec& sampler,
                     const std::vector<double>& radii, std::int64_t horizon,
                     std::int64_t trials, const SpaceTag& space, std::uint64_t seed,
                     int threads) {
    if (trials < 1) throw ValidationError("estimate_c needs at least one trial");
    if (radii.empty()) throw ValidationError("estimate_c needs at least one radius");
    if (horizon < 10) throw HorizonTooShort("estimate_c needs horizon >= 10");

    CEstimate est;
    est.radii = radii;
    est.horizon = horizon;
    est.per_trial.resize(static_cast<std::size_t>(trials) * radii.size());

    parallel_for_indexed(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        std::uint64_t trial_seed = derive_seed(seed, t);
        Rng rng(trial_seed);
        SparseVector x0 = sampler.sample(rng);
        VisitRecord rec = orbit(op, x0, horizon, space);
        for (std::size_t r = 0; r < radii.size(); ++r) {
            DensityProfile prof = density_profile(visit_set(rec, radii[r]));
            CTrialRow row;
            row.trial = static_cast<std::int64_t>(t);
            row.seed = trial_seed;
            row.radius = radii[r];
            row.upper_est = prof.upper_est;
            row.lower_est = prof.lower_est;
            row.overflow = rec.overflow;
            est.per_trial[t * radii.size() + r] = row;
        }
    });

    double value = 0.0;
    for (const auto& row : est.per_trial) value = std::max(value, row.upper_est);
    est.value = value;
    return est;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string c_estimate_csv(const CEstimate& est) {
    std::string out = "trial,seed,radius,upper_est,lower_est,overflow_flag\n";
    for (const auto& row : est.per_trial) {
        out += std::to_string(row.trial);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += format_double(row.radius);
        out += ',';
        out += format_double(row.upper_est);
        out += ',';
        out += format_double(row.lower_est);
        out += ',';
        out += row.overflow ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace ergolin
