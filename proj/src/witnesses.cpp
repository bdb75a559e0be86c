#include "ergolin/witnesses.hpp"

#include <algorithm>
#include <cmath>

#include "ergolin/rng.hpp"

namespace ergolin {

namespace {

// ---------- shared measurement helpers ----------

std::vector<double> prefix_log_weights(const OperatorSpec& op, std::int64_t top) {
    if (op.variant != OperatorSpec::Variant::Shift || op.bilateral) {
        throw ValidationError("witness designs need a unilateral weighted shift");
    }
    std::vector<double> lw(static_cast<std::size_t>(top) + 1, 0.0);
    for (std::int64_t k = 1; k <= top; ++k) {
        double w = op.weights.at(k);
        if (!(w > 1.0)) {
            throw ValidationError("witness designs need weights > 1 at every index");
        }
        lw[static_cast<std::size_t>(k)] = lw[static_cast<std::size_t>(k - 1)] + std::log(w);
    }
    return lw;
}

IntegerSet level_set_below(const std::vector<double>& norms, std::int64_t h, double thr) {
    IntegerSet s;
    s.horizon = h;
    for (std::int64_t i = 1; i <= h; ++i) {
        if (norms[static_cast<std::size_t>(i - 1)] <= thr) s.elements.push_back(i);
    }
    return s;
}

IntegerSet level_set_at_least(const std::vector<double>& norms, std::int64_t h, double thr) {
    IntegerSet s;
    s.horizon = h;
    for (std::int64_t i = 1; i <= h; ++i) {
        if (norms[static_cast<std::size_t>(i - 1)] >= thr) s.elements.push_back(i);
    }
    return s;
}

double window_max(const std::vector<double>& norms, std::int64_t lo, std::int64_t hi) {
    double m = 0.0;
    for (std::int64_t i = lo; i <= hi; ++i) {
        m = std::max(m, norms[static_cast<std::size_t>(i - 1)]);
    }
    return m;
}

double window_min(const std::vector<double>& norms, std::int64_t lo, std::int64_t hi) {
    double m = HUGE_VAL;
    for (std::int64_t i = lo; i <= hi; ++i) {
        m = std::min(m, norms[static_cast<std::size_t>(i - 1)]);
    }
    return m;
}

WitnessClaim make_claim(std::string label, std::string kind, std::int64_t lo, std::int64_t hi,
                        std::int64_t horizon, double measured, double bound, std::string cmp,
                        std::int64_t target = -1) {
    WitnessClaim c;
    c.label = std::move(label);
    c.kind = std::move(kind);
    c.lo = lo;
    c.hi = hi;
    c.horizon = horizon;
    c.measured = measured;
    c.bound = bound;
    c.comparison = std::move(cmp);
    c.pass = c.comparison == "<=" ? measured <= bound : measured >= bound;
    c.target = target;
    return c;
}

bool all_pass(const std::vector<WitnessClaim>& claims) {
    for (const auto& c : claims) {
        if (!c.pass) return false;
    }
    return true;
}

// ---------- scheduled visits (fhc) ----------

std::int64_t target_len(const SparseVector& y) {
    if (y.empty()) return 0;
    if (y.min_index() < 0) {
        throw ValidationError("targets must be supported within [0, len)");
    }
    return y.max_index() + 1;
}

struct FhcDesign {
    SparseVector x0;
    std::int64_t max_len = 0;
};

FhcDesign design_fhc(const OperatorSpec& op, const std::vector<SparseVector>& targets,
                     const Schedule& schedule, double eps) {
    if (targets.size() != schedule.sets.size()) {
        throw ValidationError("one schedule set per target required");
    }
    if (!(eps > 0.0)) throw ValidationError("eps must be positive");
    FhcDesign d;
    for (const auto& y : targets) d.max_len = std::max(d.max_len, target_len(y));
    if (targets.empty()) return d;

    std::int64_t top = schedule.horizon + d.max_len;
    std::vector<double> lw = prefix_log_weights(op, top);

    // coordinate ownership: earlier targets reserve their whole window,
    // zeros included, so later placements cannot pollute a visit
    std::vector<std::int32_t> owner(static_cast<std::size_t>(top) + 1, -1);
    for (std::size_t p = 0; p < targets.size(); ++p) {
        std::int64_t L = target_len(targets[p]);
        for (std::int64_t n : schedule.sets[p].elements) {
            for (std::int64_t t = 0; t < L; ++t) {
                auto coord = static_cast<std::size_t>(n + t);
                if (owner[coord] != -1) continue;
                owner[coord] = static_cast<std::int32_t>(p);
                Complex y = targets[p].at(t);
                if (std::abs(y) == 0.0) continue;
                // x0_{n+t} = y_p(t) W(t) / W(t+n), so step n restores y_p(t)
                d.x0.set(n + t, y * std::exp(lw[static_cast<std::size_t>(t)] - lw[coord]));
            }
        }
    }

    // predicted worst-case window error; contested or underflowed
    // coordinates surface here before any orbit is run
    for (std::size_t p = 0; p < targets.size(); ++p) {
        std::int64_t L = target_len(targets[p]);
        for (std::int64_t n : schedule.sets[p].elements) {
            double err = 0.0;
            for (std::int64_t t = 0; t < L; ++t) {
                auto coord = static_cast<std::size_t>(n + t);
                Complex actual =
                    d.x0.at(n + t) * std::exp(lw[coord] - lw[static_cast<std::size_t>(t)]);
                err = std::max(err, std::abs(actual - targets[p].at(t)));
            }
            if (err > eps) {
                throw ScheduleTooTight("block at n = " + std::to_string(n) + " for target " +
                                       std::to_string(p) + " predicts window error " +
                                       std::to_string(err));
            }
        }
    }
    return d;
}

std::vector<WitnessClaim> measure_fhc(const OperatorSpec& op, const SparseVector& x0,
                                      const std::vector<SparseVector>& targets,
                                      const Schedule& schedule, double eps,
                                      const SpaceTag& space) {
    std::vector<WitnessClaim> claims;
    if (targets.empty()) return claims;
    std::int64_t max_len = 0;
    for (const auto& y : targets) max_len = std::max(max_len, target_len(y));
    std::vector<std::int64_t> tracked;
    for (std::int64_t t = 0; t < max_len; ++t) tracked.push_back(t);

    VisitRecord rec = orbit(op, x0, schedule.horizon, space, tracked);
    if (rec.overflow) throw OverflowDetected("witness orbit overflowed");

    for (std::size_t p = 0; p < targets.size(); ++p) {
        std::int64_t L = target_len(targets[p]);
        double maxerr = 0.0;
        IntegerSet visits;
        visits.horizon = schedule.horizon;
        for (std::int64_t n : schedule.sets[p].elements) {
            double err = 0.0;
            for (std::int64_t t = 0; t < L; ++t) {
                Complex got = rec.tracked[static_cast<std::size_t>(t)]
                                         [static_cast<std::size_t>(n - 1)];
                err = std::max(err, std::abs(got - targets[p].at(t)));
            }
            maxerr = std::max(maxerr, err);
            if (err <= eps) visits.elements.push_back(n);
        }
        auto pi = static_cast<std::int64_t>(p);
        claims.push_back(make_claim("target " + std::to_string(p) + " window error",
                                    "visit-error-max", 1, schedule.horizon, schedule.horizon,
                                    maxerr, eps, "<=", pi));
        DensityProfile prof = density_profile(visits);
        double declared = schedule.declared_density[p];
        claims.push_back(make_claim("target " + std::to_string(p) + " visit density (lower)",
                                    "visit-density-lower", 1, schedule.horizon,
                                    schedule.horizon, prof.lower_est, declared - 0.01, ">=",
                                    pi));
        claims.push_back(make_claim("target " + std::to_string(p) + " visit density (upper)",
                                    "visit-density-upper", 1, schedule.horizon,
                                    schedule.horizon, prof.upper_est, declared + 0.01, "<=",
                                    pi));
    }
    return claims;
}

// ---------- norm collapse designs ----------

void validate_dist_null_params(std::int64_t g, std::int64_t depth, std::int64_t b1) {
    if (g < 4) throw ValidationError("block growth must be >= 4");
    if (depth < 2 || depth > 40) throw ValidationError("depth must lie in [2, 40]");
    if (b1 < 4) throw ValidationError("first block must start at >= 4");
}

std::int64_t dist_null_horizon(std::int64_t g, std::int64_t depth, std::int64_t b1) {
    double h = static_cast<double>(b1) * std::pow(static_cast<double>(g),
                                                  static_cast<double>(depth - 1));
    if (h > 2147483647.0) {
        throw ValidationError("block schedule exceeds the 2^31 step budget");
    }
    std::int64_t out = b1;
    for (std::int64_t r = 1; r < depth; ++r) out *= g;
    return out;
}

void add_spike(SparseVector& x0, const std::vector<double>& lw, std::int64_t q, double peak) {
    double lv = std::log(peak) - lw[static_cast<std::size_t>(q)];
    if (lv < std::log(1e-280)) {
        throw ValidationError("spike value underflows; reduce the depth or the growth");
    }
    if (std::abs(x0.at(q)) != 0.0) throw ValidationError("spike collision at " + std::to_string(q));
    x0.set(q, Complex(std::exp(lv), 0.0));
}

SparseVector design_dist_null(const OperatorSpec& op, std::int64_t g, std::int64_t depth,
                              std::int64_t b1) {
    validate_dist_null_params(g, depth, b1);
    std::int64_t horizon = dist_null_horizon(g, depth, b1);
    std::vector<double> lw = prefix_log_weights(op, horizon);
    std::vector<std::int64_t> b(static_cast<std::size_t>(depth) + 1);
    b[1] = b1;
    for (std::int64_t r = 2; r <= depth; ++r) b[static_cast<std::size_t>(r)] =
        b[static_cast<std::size_t>(r - 1)] * g;

    SparseVector x0;
    for (std::int64_t r = 1; r < depth; ++r) {
        std::int64_t len = b[static_cast<std::size_t>(r + 1)] - b[static_cast<std::size_t>(r)];
        // tall spike: a high plateau that dies exactly where block r's bound
        // window begins
        add_spike(x0, lw, b[static_cast<std::size_t>(r)] + len / r - 1, 8.0);
    }
    for (std::int64_t r = 2; r < depth; ++r) {
        // low spike pinning the tail of block r well under the 1/r bound
        add_spike(x0, lw, b[static_cast<std::size_t>(r + 1)] - 1,
                  std::min(0.5 / static_cast<double>(r), 0.05));
    }
    return x0;
}

std::vector<WitnessClaim> measure_dist_null(const OperatorSpec& op, const SparseVector& x0,
                                            std::int64_t g, std::int64_t depth,
                                            std::int64_t b1, const SpaceTag& space) {
    validate_dist_null_params(g, depth, b1);
    std::int64_t horizon = dist_null_horizon(g, depth, b1);
    VisitRecord rec = orbit(op, x0, horizon, space);
    if (rec.overflow) throw OverflowDetected("witness orbit overflowed");

    std::vector<WitnessClaim> claims;
    DensityProfile low = density_profile(level_set_below(rec.norms, horizon, 0.1));
    claims.push_back(make_claim("low-norm dwell", "density-upper", 1, horizon, horizon,
                                low.upper_est, 1.0 - 2.0 / static_cast<double>(depth), ">="));

    std::int64_t br = b1;
    for (std::int64_t r = 1; r < depth; ++r) {
        std::int64_t bn = br * g;
        std::int64_t lo = br + (bn - br) / r;
        if (lo <= bn - 1) {
            claims.push_back(make_claim("block " + std::to_string(r) + " tail bound",
                                        "norm-max", lo, bn - 1, horizon,
                                        window_max(rec.norms, lo, bn - 1),
                                        1.0 / static_cast<double>(r), "<=", r));
        }
        br = bn;
    }

    DensityProfile ann = density_profile(band_visit_set(rec, 1.0, 2.0));
    claims.push_back(make_claim("annulus visits", "density-lower", 1, horizon, horizon,
                                ann.lower_est, 0.05, "<="));
    return claims;
}

void validate_dist_irregular_params(std::int64_t depth, std::int64_t L1, std::int64_t c1) {
    if (depth < 2 || depth > 40 || depth % 2 != 0) {
        throw ValidationError("depth must be even and lie in [2, 40]");
    }
    if (L1 < 3) throw ValidationError("first regime length must be >= 3");
    if (c1 < 16) throw ValidationError("first regime must start at >= 16");
}

std::vector<std::int64_t> regime_starts(std::int64_t depth, std::int64_t L1, std::int64_t c1) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(depth) + 2);
    c[1] = c1;
    std::int64_t L = L1;
    for (std::int64_t k = 1; k <= depth; ++k) {
        if (c[static_cast<std::size_t>(k)] > 2147483647 / 2) {
            throw ValidationError("regime schedule exceeds the 2^31 step budget");
        }
        c[static_cast<std::size_t>(k + 1)] = c[static_cast<std::size_t>(k)] + L;
        L *= 6;
    }
    return c;
}

SparseVector design_dist_irregular(const OperatorSpec& op, std::int64_t depth, std::int64_t L1,
                                   std::int64_t c1) {
    validate_dist_irregular_params(depth, L1, c1);
    std::vector<std::int64_t> c = regime_starts(depth, L1, c1);
    std::int64_t horizon = c[static_cast<std::size_t>(depth + 1)] - 1;
    std::vector<double> lw = prefix_log_weights(op, horizon);

    double target = 1.001 * static_cast<double>(depth);
    SparseVector x0;
    std::int64_t L = L1;
    for (std::int64_t k = 1; k <= depth; ++k) {
        std::int64_t q = c[static_cast<std::size_t>(k + 1)] - 1;
        if (k % 2 == 0) {
            // high spike: contribution equals `target` when regime k opens
            // and climbs from there to the end of the regime
            double lv = std::log(target) + lw[static_cast<std::size_t>(L - 1)] -
                        lw[static_cast<std::size_t>(q)];
            double cap = std::log(1e250) - lw[static_cast<std::size_t>(q)];
            lv = std::min(lv, cap);
            if (lv < std::log(1e-280)) {
                throw ValidationError("spike value underflows; reduce the depth");
            }
            if (std::abs(x0.at(q)) != 0.0) {
                throw ValidationError("spike collision at " + std::to_string(q));
            }
            x0.set(q, Complex(std::exp(lv), 0.0));
        } else {
            // low spike: keeps regime k pinned under 1/(4 depth)
            add_spike(x0, lw, q, 0.25 / static_cast<double>(depth));
        }
        L *= 6;
    }
    return x0;
}

std::vector<WitnessClaim> measure_dist_irregular(const OperatorSpec& op,
                                                 const SparseVector& x0, std::int64_t depth,
                                                 std::int64_t L1, std::int64_t c1,
                                                 const SpaceTag& space) {
    validate_dist_irregular_params(depth, L1, c1);
    std::vector<std::int64_t> c = regime_starts(depth, L1, c1);
    std::int64_t horizon = c[static_cast<std::size_t>(depth + 1)] - 1;
    std::int64_t h_low = c[static_cast<std::size_t>(depth)] - 1;  // end of the last odd regime
    double thr_low = 1.0 / static_cast<double>(depth);
    double thr_high = static_cast<double>(depth);

    VisitRecord rec = orbit(op, x0, horizon, space);
    if (rec.overflow) throw OverflowDetected("witness orbit overflowed");

    std::vector<WitnessClaim> claims;
    double dens_bound = 1.0 - 2.0 / static_cast<double>(depth);
    DensityProfile low = density_profile(level_set_below(rec.norms, h_low, thr_low));
    claims.push_back(make_claim("low-dwell density", "density-upper", 1, h_low, h_low,
                                low.upper_est, dens_bound, ">="));
    DensityProfile high = density_profile(level_set_at_least(rec.norms, horizon, thr_high));
    claims.push_back(make_claim("high-dwell density", "density-upper", 1, horizon, horizon,
                                high.upper_est, dens_bound, ">="));

    std::int64_t a_lo = c[static_cast<std::size_t>(depth - 1)];
    std::int64_t a_hi = c[static_cast<std::size_t>(depth)] - 10;
    if (a_lo <= a_hi) {
        claims.push_back(make_claim("final low regime bound", "norm-max", a_lo, a_hi, horizon,
                                    window_max(rec.norms, a_lo, a_hi), thr_low, "<="));
    }
    std::int64_t b_lo = c[static_cast<std::size_t>(depth)];
    std::int64_t b_hi = horizon;
    claims.push_back(make_claim("final high regime bound", "norm-min", b_lo, b_hi, horizon,
                                window_min(rec.norms, b_lo, b_hi), thr_high, ">="));
    return claims;
}

// ---------- bilateral designed shift ----------

std::vector<WitnessClaim> measure_br(const OperatorSpec& op, std::int64_t residue,
                                     std::int64_t modulus, std::int64_t horizon,
                                     std::int64_t n_samples, std::uint64_t seed,
                                     int threads) {
    SamplerSpec sampler;
    sampler.kind = SamplerSpec::Kind::PinnedCoordinate;
    sampler.lo = -3;
    sampler.hi = 0;
    sampler.amplitude = 0.5;
    SpaceTag space = SpaceTag::c0(true);

    std::vector<WitnessClaim> claims;
    std::int64_t first = residue == 0 ? modulus : residue;
    for (std::int64_t t = 0; t < n_samples; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        SparseVector x = sampler.sample(rng);
        VisitRecord rec = orbit(op, x, horizon, space);
        double x0_abs = std::abs(x.at(0));
        double worst = HUGE_VAL;
        for (std::int64_t i = first; i <= horizon; i += modulus) {
            worst = std::min(worst, rec.norms[static_cast<std::size_t>(i - 1)] - x0_abs);
        }
        claims.push_back(make_claim("sample " + std::to_string(t) + " orbit floor",
                                    "coordinate-floor", 1, horizon, horizon, worst, 0.0, ">=",
                                    t));
    }
    CEstimate est = estimate_c(op, sampler, {0.99}, horizon, n_samples, space, seed, threads);
    double d = 1.0 / static_cast<double>(modulus);
    claims.push_back(make_claim("visit-density parameter", "c-estimate", 1, horizon, horizon,
                                est.value, 1.0 - d + 0.02, "<="));
    return claims;
}

// ---------- claim comparison ----------

void compare_claims(const std::vector<WitnessClaim>& stored,
                    const std::vector<WitnessClaim>& fresh, VerifyReport& rep) {
    if (stored.size() != fresh.size()) {
        rep.mismatches.push_back("claim count differs: stored " +
                                 std::to_string(stored.size()) + ", recomputed " +
                                 std::to_string(fresh.size()));
        return;
    }
    for (std::size_t k = 0; k < stored.size(); ++k) {
        const auto& a = stored[k];
        const auto& b = fresh[k];
        std::string where = "claim " + std::to_string(k) + " (" + b.label + "): ";
        if (a.label != b.label || a.kind != b.kind || a.comparison != b.comparison) {
            rep.mismatches.push_back(where + "descriptor differs");
        }
        if (a.lo != b.lo || a.hi != b.hi || a.horizon != b.horizon || a.target != b.target) {
            rep.mismatches.push_back(where + "window differs");
        }
        if (a.bound != b.bound) rep.mismatches.push_back(where + "bound differs");
        if (a.measured != b.measured) {
            rep.mismatches.push_back(where + "measured " + format_double(a.measured) +
                                     " recomputed as " + format_double(b.measured));
        }
        if (a.pass != b.pass) rep.mismatches.push_back(where + "pass flag differs");
    }
}

}  // namespace

// ---------- schedules ----------

Schedule make_schedule(std::vector<IntegerSet> sets, std::vector<double> declared,
                       std::int64_t horizon) {
    if (sets.size() != declared.size()) {
        throw ValidationError("one declared density per schedule set");
    }
    if (horizon < 1) throw HorizonTooShort("schedule horizon must be >= 1");
    for (auto& s : sets) {
        s.horizon = horizon;
        s.validate();
    }
    for (double d : declared) {
        if (!(d > 0.0 && d <= 1.0)) throw ValidationError("declared density outside (0,1]");
    }

    Schedule out;
    out.horizon = horizon;
    std::int64_t within = 0;
    std::vector<std::pair<std::int64_t, std::size_t>> all;
    for (std::size_t p = 0; p < sets.size(); ++p) {
        for (std::size_t k = 0; k < sets[p].elements.size(); ++k) {
            if (k > 0) {
                std::int64_t gap = sets[p].elements[k] - sets[p].elements[k - 1];
                within = within == 0 ? gap : std::min(within, gap);
            }
            all.emplace_back(sets[p].elements[k], p);
        }
    }
    std::sort(all.begin(), all.end());
    std::int64_t across = 0;
    for (std::size_t k = 1; k < all.size(); ++k) {
        if (all[k].first == all[k - 1].first) {
            throw ValidationError("schedule sets must be pairwise disjoint");
        }
        if (all[k].second != all[k - 1].second) {
            std::int64_t gap = all[k].first - all[k - 1].first;
            across = across == 0 ? gap : std::min(across, gap);
        }
    }
    out.min_gap_within = within;
    out.min_gap_across = across;
    out.sets = std::move(sets);
    out.declared_density = std::move(declared);
    return out;
}

Schedule dyadic_schedule(int P, std::int64_t horizon) {
    if (P < 1 || P > 20) throw ValidationError("schedule depth must lie in [1, 20]");
    if (horizon < 1) throw HorizonTooShort("schedule horizon must be >= 1");
    std::vector<IntegerSet> sets(static_cast<std::size_t>(P));
    std::vector<double> declared(static_cast<std::size_t>(P));
    for (int p = 1; p <= P; ++p) {
        std::int64_t mod = std::int64_t(1) << p;
        std::int64_t res = std::int64_t(1) << (p - 1);
        std::int64_t start = static_cast<std::int64_t>(p) * (std::int64_t(1) << (p + 1));
        std::int64_t n0 = res + ((start - res + mod - 1) / mod) * mod;
        IntegerSet s;
        s.horizon = horizon;
        for (std::int64_t n = n0; n <= horizon; n += mod) s.elements.push_back(n);
        sets[static_cast<std::size_t>(p - 1)] = std::move(s);
        declared[static_cast<std::size_t>(p - 1)] = std::ldexp(1.0, -p);
    }
    Schedule out = make_schedule(std::move(sets), std::move(declared), horizon);
    out.dyadic_p = P;
    return out;
}

json schedule_to_json(const Schedule& s) {
    json j;
    j["horizon"] = s.horizon;
    if (s.dyadic_p) {
        j["dyadic_p"] = *s.dyadic_p;
        return j;
    }
    j["declared"] = s.declared_density;
    json sets = json::array();
    for (const auto& st : s.sets) sets.push_back(st.elements);
    j["sets"] = std::move(sets);
    return j;
}

Schedule schedule_from_json(const json& j) {
    auto horizon = j.at("horizon").get<std::int64_t>();
    if (j.contains("dyadic_p")) return dyadic_schedule(j.at("dyadic_p").get<int>(), horizon);
    std::vector<IntegerSet> sets;
    for (const auto& e : j.at("sets")) {
        IntegerSet s;
        s.elements = e.get<std::vector<std::int64_t>>();
        s.horizon = horizon;
        sets.push_back(std::move(s));
    }
    return make_schedule(std::move(sets), j.at("declared").get<std::vector<double>>(), horizon);
}

// ---------- certificates ----------

json certificate_to_json(const WitnessCertificate& cert) {
    json claims = json::array();
    for (const auto& c : cert.claims) {
        claims.push_back(json{{"label", c.label},
                              {"kind", c.kind},
                              {"lo", c.lo},
                              {"hi", c.hi},
                              {"horizon", c.horizon},
                              {"measured", c.measured},
                              {"bound", c.bound},
                              {"comparison", c.comparison},
                              {"pass", c.pass},
                              {"target", c.target}});
    }
    return json{{"schema", 1},       {"kind", cert.kind},       {"op", cert.op},
                {"payload", cert.payload}, {"horizon", cert.horizon}, {"claims", claims},
                {"pass", cert.pass}};
}

WitnessCertificate certificate_from_json(const json& j) {
    if (!j.is_object() || j.value("schema", 0) != 1) {
        throw ValidationError("certificate schema must be 1");
    }
    WitnessCertificate cert;
    cert.kind = j.at("kind").get<std::string>();
    cert.op = j.at("op");
    cert.payload = j.at("payload");
    cert.horizon = j.at("horizon").get<std::int64_t>();
    for (const auto& c : j.at("claims")) {
        WitnessClaim w;
        w.label = c.at("label").get<std::string>();
        w.kind = c.at("kind").get<std::string>();
        w.lo = c.at("lo").get<std::int64_t>();
        w.hi = c.at("hi").get<std::int64_t>();
        w.horizon = c.at("horizon").get<std::int64_t>();
        w.measured = c.at("measured").get<double>();
        w.bound = c.at("bound").get<double>();
        w.comparison = c.at("comparison").get<std::string>();
        w.pass = c.at("pass").get<bool>();
        w.target = c.at("target").get<std::int64_t>();
        cert.claims.push_back(std::move(w));
    }
    cert.pass = j.at("pass").get<bool>();
    return cert;
}

// ---------- builders ----------

FhcWitness build_fhc_vector(const OperatorSpec& op, const std::vector<SparseVector>& targets,
                            const Schedule& schedule, double eps, const SpaceTag& space) {
    FhcDesign d = design_fhc(op, targets, schedule, eps);
    WitnessCertificate cert;
    cert.kind = "fhc";
    cert.op = operator_to_json(op);
    cert.horizon = schedule.horizon;
    json tg = json::array();
    for (const auto& y : targets) tg.push_back(vector_to_json(y, space));
    cert.payload = json{{"targets", tg},
                        {"schedule", schedule_to_json(schedule)},
                        {"eps", eps},
                        {"space", space_to_json(space)},
                        {"x0_digest", vector_digest(d.x0)}};
    cert.claims = measure_fhc(op, d.x0, targets, schedule, eps, space);
    cert.pass = all_pass(cert.claims);
    return {std::move(d.x0), std::move(cert)};
}

OperatorSpec dist_null_operator(std::int64_t g, std::int64_t depth, std::int64_t b1) {
    validate_dist_null_params(g, depth, b1);
    dist_null_horizon(g, depth, b1);
    double mu = 1e-7;
    double jump = std::max(320.5, 32.0 * static_cast<double>(depth));
    double w_win = std::exp(mu + std::log(jump) / 8.0);
    return OperatorSpec::backward_shift(
        WeightSpec::step_profile(std::exp(mu), {{257, 264, w_win}}), false);
}

DistWitness build_dist_null_vector(const OperatorSpec& op, std::int64_t g, std::int64_t depth,
                                   std::int64_t b1, const SpaceTag& space) {
    SparseVector x0 = design_dist_null(op, g, depth, b1);
    WitnessCertificate cert;
    cert.kind = "dist-null";
    cert.op = operator_to_json(op);
    cert.horizon = dist_null_horizon(g, depth, b1);
    cert.payload = json{{"g", g},
                        {"depth", depth},
                        {"b1", b1},
                        {"x0", vector_to_json(x0, space)}};
    cert.claims = measure_dist_null(op, x0, g, depth, b1, space);
    cert.pass = all_pass(cert.claims);
    return {std::move(x0), std::move(cert)};
}

OperatorSpec dist_irregular_operator(std::int64_t depth, std::int64_t L1, std::int64_t c1) {
    validate_dist_irregular_params(depth, L1, c1);
    regime_starts(depth, L1, c1);
    double mu = 1e-7;
    double jump = std::max(256.5, 4.006 * static_cast<double>(depth) *
                                      static_cast<double>(depth));
    double w_win = std::exp(mu + std::log(jump) / 8.0);
    std::vector<WeightWindow> windows;
    std::int64_t L = L1;
    for (std::int64_t k = 1; k <= depth; ++k) {
        if (k % 2 == 0) windows.push_back({L + 1, L + 8, w_win});
        L *= 6;
    }
    return OperatorSpec::backward_shift(WeightSpec::step_profile(std::exp(mu), windows),
                                        false);
}

DistWitness build_dist_irregular_vector(const OperatorSpec& op, std::int64_t depth,
                                        std::int64_t L1, std::int64_t c1,
                                        const SpaceTag& space) {
    SparseVector x0 = design_dist_irregular(op, depth, L1, c1);
    WitnessCertificate cert;
    cert.kind = "dist-irregular";
    cert.op = operator_to_json(op);
    cert.horizon = regime_starts(depth, L1, c1)[static_cast<std::size_t>(depth + 1)] - 1;
    cert.payload = json{{"depth", depth},
                        {"L1", L1},
                        {"c1", c1},
                        {"x0", vector_to_json(x0, space)}};
    cert.claims = measure_dist_irregular(op, x0, depth, L1, c1, space);
    cert.pass = all_pass(cert.claims);
    return {std::move(x0), std::move(cert)};
}

BrWitness build_br_shift(std::int64_t residue, std::int64_t modulus, double rho,
                         std::int64_t horizon, std::int64_t n_samples, std::uint64_t seed,
                         int threads) {
    if (modulus < 2) throw ValidationError("modulus must be >= 2");
    if (horizon < 10) throw HorizonTooShort("horizon must be >= 10");
    if (n_samples < 1 || n_samples > 4096) {
        throw ValidationError("sample count must lie in [1, 4096]");
    }
    OperatorSpec op =
        OperatorSpec::backward_shift(WeightSpec::br_designed(residue, modulus, rho, 2.0), true);
    WitnessCertificate cert;
    cert.kind = "br-inequality";
    cert.op = operator_to_json(op);
    cert.horizon = horizon;
    cert.payload = json{{"residue", residue}, {"modulus", modulus}, {"rho", rho},
                        {"horizon", horizon}, {"trials", n_samples}, {"seed", seed}};
    cert.claims = measure_br(op, residue, modulus, horizon, n_samples, seed, threads);
    cert.pass = all_pass(cert.claims);
    return {std::move(op), std::move(cert)};
}

// ---------- verification ----------

VerifyReport verify_certificate(const json& j) {
    WitnessCertificate cert = certificate_from_json(j);
    VerifyReport rep;
    OperatorSpec op = operator_from_json(cert.op);
    std::vector<WitnessClaim> fresh;

    if (cert.kind == "fhc") {
        std::vector<SparseVector> targets;
        for (const auto& t : cert.payload.at("targets")) {
            targets.push_back(vector_from_json(t).first);
        }
        Schedule schedule = schedule_from_json(cert.payload.at("schedule"));
        double eps = cert.payload.at("eps").get<double>();
        SpaceTag space = space_from_json(cert.payload.at("space"));
        FhcDesign d = design_fhc(op, targets, schedule, eps);
        if (vector_digest(d.x0) != cert.payload.at("x0_digest").get<std::uint64_t>()) {
            rep.mismatches.push_back("rebuilt vector digest differs");
        }
        fresh = measure_fhc(op, d.x0, targets, schedule, eps, space);
    } else if (cert.kind == "dist-null") {
        auto [x0, space] = vector_from_json(cert.payload.at("x0"));
        auto g = cert.payload.at("g").get<std::int64_t>();
        auto depth = cert.payload.at("depth").get<std::int64_t>();
        auto b1 = cert.payload.at("b1").get<std::int64_t>();
        if (vector_digest(design_dist_null(op, g, depth, b1)) != vector_digest(x0)) {
            rep.mismatches.push_back("stored vector differs from the designed one");
        }
        fresh = measure_dist_null(op, x0, g, depth, b1, space);
    } else if (cert.kind == "dist-irregular") {
        auto [x0, space] = vector_from_json(cert.payload.at("x0"));
        auto depth = cert.payload.at("depth").get<std::int64_t>();
        auto L1 = cert.payload.at("L1").get<std::int64_t>();
        auto c1 = cert.payload.at("c1").get<std::int64_t>();
        if (vector_digest(design_dist_irregular(op, depth, L1, c1)) != vector_digest(x0)) {
            rep.mismatches.push_back("stored vector differs from the designed one");
        }
        fresh = measure_dist_irregular(op, x0, depth, L1, c1, space);
    } else if (cert.kind == "br-inequality") {
        auto residue = cert.payload.at("residue").get<std::int64_t>();
        auto modulus = cert.payload.at("modulus").get<std::int64_t>();
        auto rho = cert.payload.at("rho").get<double>();
        OperatorSpec rebuilt = OperatorSpec::backward_shift(
            WeightSpec::br_designed(residue, modulus, rho, 2.0), true);
        if (operator_to_json(rebuilt) != cert.op) {
            rep.mismatches.push_back("stored operator differs from the designed one");
        }
        fresh = measure_br(op, residue, modulus, cert.payload.at("horizon").get<std::int64_t>(),
                           cert.payload.at("trials").get<std::int64_t>(),
                           cert.payload.at("seed").get<std::uint64_t>(), 0);
    } else {
        throw ValidationError("unknown certificate kind: " + cert.kind);
    }

    compare_claims(cert.claims, fresh, rep);
    rep.pass = all_pass(fresh);
    if (cert.pass != rep.pass) {
        rep.mismatches.push_back("stored pass flag disagrees with the recomputation");
    }
    rep.match = rep.mismatches.empty();
    return rep;
}

}  // namespace ergolin
