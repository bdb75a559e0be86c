// Acceptance gate: ten end-to-end checks, one [PASS]/[FAIL] line each.
// Exit status is the number of failed checks. Tolerances and runtime
// budgets are pinned here, independently of the library defaults.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ergolin/density.hpp"
#include "ergolin/experiments.hpp"
#include "ergolin/measures.hpp"
#include "ergolin/operators.hpp"
#include "ergolin/rng.hpp"
#include "ergolin/steinhaus.hpp"

#include "helpers.hpp"

using namespace ergolin;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

double claim_measured(const json& summary, const std::string& label) {
    for (const auto& c : summary.at("claims")) {
        if (c.at("label").get<std::string>() == label) return c.at("measured").get<double>();
    }
    throw Error("claim not found: " + label);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------- checks 1..9: the pinned experiment designs ----------

Verdict check_c_ergodic() {
    Verdict v;
    Outcome out = run_experiment("c-ergodic", RunOptions{});
    double est = out.summary.at("estimate").get<double>();
    double est4 = out.summary.at("estimate_4x").get<double>();
    v.require(est >= 0.90, "estimate " + fmt(est) + " < 0.90 at horizon 1e5");
    v.require(est4 >= est - 0.01,
              "estimate dropped from " + fmt(est) + " to " + fmt(est4) + " at horizon 4e5");
    v.require(out.pass, "experiment reported failure");
    v.note("estimate " + fmt(est) + " -> " + fmt(est4));
    return v;
}

Verdict check_c_br_bound() {
    Verdict v;
    Outcome out = run_experiment("c-br-bound", RunOptions{});
    double est = out.summary.at("estimate").get<double>();
    double floor_min = out.summary.at("floor_min").get<double>();
    v.require(est <= 0.52, "estimate " + fmt(est) + " > 0.52 at radius 0.99");
    v.require(floor_min >= 0.0,
              "orbit floor violated with zero tolerance: min " + fmt(floor_min));
    v.require(out.pass, "experiment reported failure");
    v.note("estimate " + fmt(est) + ", floor min " + fmt(floor_min));
    return v;
}

Verdict check_dist_null() {
    Verdict v;
    Outcome out = run_experiment("dist-null", RunOptions{});
    double dwell = claim_measured(out.summary, "low-norm dwell");
    double annulus = claim_measured(out.summary, "annulus visits");
    v.require(dwell >= 0.80, "low-norm dwell density " + fmt(dwell) + " < 0.80");
    v.require(annulus <= 0.05, "annulus lower density " + fmt(annulus) + " > 0.05");
    v.require(out.pass, "experiment reported failure (block tails included)");
    v.note("dwell " + fmt(dwell) + ", annulus " + fmt(annulus));
    return v;
}

Verdict check_dist_irregular() {
    Verdict v;
    Outcome out = run_experiment("dist-irregular", RunOptions{});
    double low = claim_measured(out.summary, "low-dwell density");
    double high = claim_measured(out.summary, "high-dwell density");
    double fl = claim_measured(out.summary, "final low regime bound");
    double fh = claim_measured(out.summary, "final high regime bound");
    v.require(low >= 0.75, "low-dwell density " + fmt(low) + " < 0.75");
    v.require(high >= 0.75, "high-dwell density " + fmt(high) + " < 0.75");
    v.require(fl <= 0.125, "final low-regime norm " + fmt(fl) + " > 1/8");
    v.require(fh >= 8.0, "final high-regime norm " + fmt(fh) + " < 8");
    v.require(out.pass, "experiment reported failure");
    v.note("dwell " + fmt(low) + "/" + fmt(high) + ", extremes " + fmt(fl) + "/" + fmt(fh));
    return v;
}

Verdict check_fhc_visits() {
    Verdict v;
    Outcome out = run_experiment("fhc-visits", RunOptions{});
    const double declared[2] = {0.5, 0.25};
    for (int p = 0; p < 2; ++p) {
        std::string tag = "target " + std::to_string(p);
        double err = claim_measured(out.summary, tag + " window error");
        double lo = claim_measured(out.summary, tag + " visit density (lower)");
        double hi = claim_measured(out.summary, tag + " visit density (upper)");
        v.require(err <= 1e-6, tag + " window error " + fmt(err) + " > 1e-6");
        v.require(lo >= declared[p] - 0.01,
                  tag + " lower density " + fmt(lo) + " off " + fmt(declared[p]));
        v.require(hi <= declared[p] + 0.01,
                  tag + " upper density " + fmt(hi) + " off " + fmt(declared[p]));
    }
    v.require(out.pass, "experiment reported failure");
    return v;
}

Verdict check_nu_n() {
    Verdict v;
    Outcome out = run_experiment("nu-n-convergence", RunOptions{});
    double w10 = out.summary.at("w1").at("10").get<double>();
    double w50 = out.summary.at("w1").at("50").get<double>();
    double w200 = out.summary.at("w1").at("200").get<double>();
    v.require(w10 > w50 && w50 > w200,
              "W1 not strictly decreasing: " + fmt(w10) + ", " + fmt(w50) + ", " + fmt(w200));
    v.require(w200 <= 0.05, "W1 at N=200 is " + fmt(w200) + " > 0.05");
    v.require(out.pass, "experiment reported failure");
    v.note("W1 " + fmt(w10) + " > " + fmt(w50) + " > " + fmt(w200));
    return v;
}

Verdict check_measure_ops() {
    Verdict v;
    Outcome out = run_experiment("measure-ops-suite", RunOptions{});
    for (const auto& row : out.summary.at("checks")) {
        std::string name = row.at("check").get<std::string>();
        bool pass = row.at("pass").get<bool>();
        v.require(pass, "check failed: " + name);
        if (name == "periodic-defect-rotation" || name == "periodic-defect-shift") {
            double d = row.at("measured").get<double>();
            v.require(d <= 1e-10, name + " defect " + fmt(d) + " > 1e-10");
        }
        if (name == "w1-identity" || name == "w1-triangle") {
            double d = row.at("measured").get<double>();
            v.require(d <= 1e-9, name + " residual " + fmt(d) + " > 1e-9");
        }
    }
    v.require(out.pass, "experiment reported failure");
    return v;
}

Verdict check_kronecker() {
    Verdict v;
    Outcome out = run_experiment("kronecker", RunOptions{});
    auto n = out.summary.at("minimal_n").get<std::int64_t>();
    double dev = out.summary.at("deviation").get<double>();
    v.require(dev < 0.05, "deviation " + fmt(dev) + " >= eps");

    // independent minimality re-scan with the same phase arithmetic
    double theta = (std::sqrt(5.0) - 1.0) / 2.0;
    bool minimal = true;
    double at_n = HUGE_VAL;
    for (std::int64_t k = 1; k <= n; ++k) {
        double x = theta * static_cast<double>(k);
        x -= std::floor(x);
        double d = std::abs(unit_phase(x) - Complex(1.0, 0.0));
        if (k < n && d < 0.05) minimal = false;
        if (k == n) at_n = d;
    }
    v.require(minimal, "an earlier power already meets eps; n = " + std::to_string(n) +
                           " is not minimal");
    v.require(at_n == dev, "re-scan deviation differs at n");

    const auto& rel = out.summary.at("relations");
    v.require(rel.at("half") == json::array({2}), "missing relation 2 * (1/2) = 1");
    v.require(rel.at("golden-pair") == json::array({1, 1}),
              "missing relation theta + (1 - theta) = 1");
    v.require(rel.at("independent-pair").is_null(),
              "spurious relation between independent quadratic angles");
    v.require(out.pass, "experiment reported failure");
    v.note("minimal n " + std::to_string(n) + ", deviation " + fmt(dev));
    return v;
}

Verdict check_rotation_escape() {
    Verdict v;
    Outcome out = run_experiment("rotation-escape", RunOptions{});
    double measure = out.summary.at("cantor_measure").get<double>();
    double disc = out.summary.at("discrepancy").get<double>();
    double final_union = out.summary.at("union_final").get<double>();
    v.require(std::abs(measure - 0.5) <= std::ldexp(1.0, -20),
              "set measure " + fmt(measure) + " misses 0.5 by more than 2^-20");
    v.require(disc <= 0.01, "orbit discrepancy " + fmt(disc) + " > 0.01 at 1e6 steps");
    v.require(out.summary.at("union_nondecreasing").get<bool>(),
              "union measures are not monotone");
    v.require(final_union >= 0.99, "union measure " + fmt(final_union) + " < 0.99 at k=200");
    v.require(out.pass, "experiment reported failure");
    v.note("discrepancy " + fmt(disc) + ", union " + fmt(final_union));
    return v;
}

// ---------- check 10: dual-route oracle equivalence ----------

bool same_orbit(const VisitRecord& fast, const testutil::SlowOrbit& slow) {
    if (fast.norms != slow.norms) return false;
    if (fast.tracked.size() != slow.tracked.size()) return false;
    for (std::size_t k = 0; k < fast.tracked.size(); ++k) {
        if (fast.tracked[k] != slow.tracked[k]) return false;
    }
    return true;
}

Verdict check_oracles() {
    Verdict v;

    struct Combo {
        OperatorSpec op;
        SpaceTag space;
        std::int64_t horizon;
        std::int64_t idx_lo;  // index range safe for this operator's domain
        std::int64_t idx_hi;
    };
    std::vector<Combo> combos;
    combos.push_back({OperatorSpec::backward_shift(WeightSpec::constant(2.0), false),
                      SpaceTag::c0(), 1000, 0, 24});
    combos.push_back({OperatorSpec::backward_shift(WeightSpec::constant(2.0), false),
                      SpaceTag::lp(2.0), 1000, 0, 24});
    combos.push_back({OperatorSpec::backward_shift(WeightSpec::br_designed(1, 3, 0.5, 2.0),
                                                   true),
                      SpaceTag::c0(true), 1000, -6, 24});
    combos.push_back(
        {OperatorSpec::backward_shift(
             WeightSpec::step_profile(1.01, {{5, 9, 2.0}, {40, 44, 3.0}}), false),
         SpaceTag::lp(1.5), 800, 0, 24});
    combos.push_back({OperatorSpec::block_diag({0.25, (std::sqrt(5.0) - 1.0) / 2.0, 0.5}),
                      SpaceTag::c0(), 1000, 0, 2});
    {
        auto inner1 = std::make_shared<const OperatorSpec>(
            OperatorSpec::backward_shift(WeightSpec::constant(2.0), false));
        // the part spans two coordinates, so the rotation block needs two angles
        auto inner2 = std::make_shared<const OperatorSpec>(
            OperatorSpec::block_diag({0.25, (std::sqrt(5.0) - 1.0) / 2.0}));
        combos.push_back({OperatorSpec::direct_sum({{0, 6, inner1}, {6, 8, inner2}}),
                          SpaceTag::c0(), 500, 0, 7});
    }

    Rng rng(2026);
    int orbit_checks = 0;
    for (const auto& combo : combos) {
        for (int rep = 0; rep < 4; ++rep) {
            SparseVector x0 = testutil::random_vector(rng, combo.idx_lo, combo.idx_hi, 12);
            if (x0.empty()) x0 = SparseVector::unit(std::max<std::int64_t>(combo.idx_lo, 0));
            std::vector<std::int64_t> tracked{0, 3};
            VisitRecord fast = orbit(combo.op, x0, combo.horizon, combo.space, tracked);
            testutil::SlowOrbit slow =
                testutil::slow_orbit(combo.op, x0, combo.horizon, combo.space, tracked);
            if (!same_orbit(fast, slow)) {
                v.require(false, "streaming orbit diverges from the literal apply chain");
                break;
            }
            ++orbit_checks;
        }
    }

    // exact transport versus a brute-force assignment search
    SpaceTag space = SpaceTag::c0();
    IndexWindow dims{0, 4};
    int w1_checks = 0;
    for (int n = 1; n <= 8; ++n) {
        // keep lcm(n, m) == n so the permutation oracle stays at <= 8! assignments
        for (int m : {n, n % 2 == 0 ? n / 2 : 1}) {
            std::vector<SparseVector> a, b;
            for (int k = 0; k < n; ++k) a.push_back(testutil::random_vector(rng, 0, 4, 5));
            for (int k = 0; k < m; ++k) b.push_back(testutil::random_vector(rng, 0, 4, 5));
            EmpiricalMeasure mu = testutil::uniform_measure(a, space);
            EmpiricalMeasure nu = testutil::uniform_measure(b, space);
            double lib =
                wasserstein1(mu, nu, dims, TransportMethod::ExactAssignment).value;
            double ref = testutil::brute_force_w1(mu, nu, dims);
            if (!(std::abs(lib - ref) <= 1e-9 * std::max({1.0, lib, ref}))) {
                v.require(false, "exact transport " + fmt(lib) +
                                     " differs from brute force " + fmt(ref) + " at sizes " +
                                     std::to_string(n) + "x" + std::to_string(m));
            }
            ++w1_checks;
        }
    }
    v.note(std::to_string(orbit_checks) + " orbit replays bitwise, " +
           std::to_string(w1_checks) + " transport clouds within 1e-9");
    return v;
}

struct GateCheck {
    std::string name;
    double budget_seconds;
    std::function<Verdict()> run;
};

}  // namespace

int main() {
    std::vector<GateCheck> checks = {
        {"c-ergodic", 60.0, check_c_ergodic},
        {"c-br-bound", 60.0, check_c_br_bound},
        {"dist-null", 30.0, check_dist_null},
        {"dist-irregular", 30.0, check_dist_irregular},
        {"fhc-visits", 60.0, check_fhc_visits},
        {"nu-n-convergence", 120.0, check_nu_n},
        {"measure-ops-suite", 30.0, check_measure_ops},
        {"kronecker", 30.0, check_kronecker},
        {"rotation-escape", 60.0, check_rotation_escape},
        {"oracle-equivalence", 60.0, check_oracles},
    };

    int failures = 0;
    for (const auto& c : checks) {
        auto started = std::chrono::steady_clock::now();
        Verdict verdict;
        try {
            verdict = c.run();
        } catch (const std::exception& e) {
            verdict.ok = false;
            verdict.detail = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        if (elapsed > c.budget_seconds) {
            verdict.ok = false;
            verdict.note("runtime " + fmt(elapsed) + "s exceeds the " +
                         fmt(c.budget_seconds) + "s budget");
        }
        if (!verdict.ok) ++failures;
        std::printf("[%s] %s (%.1fs)%s%s\n", verdict.ok ? "PASS" : "FAIL", c.name.c_str(),
                    elapsed, verdict.detail.empty() ? "" : " — ", verdict.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
