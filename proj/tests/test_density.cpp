#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ergolin/density.hpp"
#include "ergolin/operators.hpp"

#include "helpers.hpp"

using namespace ergolin;

namespace {

IntegerSet multiples(std::int64_t m, std::int64_t horizon) {
    IntegerSet s;
    s.horizon = horizon;
    for (std::int64_t n = m; n <= horizon; n += m) s.elements.push_back(n);
    return s;
}

OperatorSpec br_parity_shift() {
    return OperatorSpec::backward_shift(WeightSpec::br_designed(1, 2, 0.5, 2.0), true);
}

}  // namespace

TEST_CASE("integer sets validate ordering, range and horizon") {
    IntegerSet bad;
    bad.horizon = 0;
    CHECK_THROWS_AS(bad.validate(), HorizonTooShort);
    bad.horizon = 10;
    bad.elements = {3, 2};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad.elements = {0, 2};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad.elements = {2, 11};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad.elements = {2, 10};
    CHECK_NOTHROW(bad.validate());
}

TEST_CASE("density of the even numbers is one half") {
    DensityProfile p = density_profile(multiples(2, 100000));
    CHECK(p.tail_start == 10000);
    CHECK(p.upper_est == 0.5);  // exact ratio (n/2)/n at even n
    CHECK(p.lower_est <= 0.5);
    CHECK(p.lower_est >= 0.5 - 1e-4);
}

TEST_CASE("geometric block union oscillates between densities 1/3 and 2/3") {
    const std::int64_t horizon = 262144;  // 4^9
    IntegerSet s;
    s.horizon = horizon;
    auto member = [](std::int64_t n) {
        for (std::int64_t b = 4; b <= 262144; b *= 4) {
            if (n >= b && n < 2 * b) return true;
        }
        return false;
    };
    for (std::int64_t n = 1; n <= horizon; ++n) {
        if (member(n)) s.elements.push_back(n);
    }
    DensityProfile p = density_profile(s);

    // independent re-count: same division, so the ratios agree bitwise
    std::int64_t count = 0;
    double lo = 1.0, hi = 0.0;
    for (std::int64_t n = 1; n <= horizon; ++n) {
        if (member(n)) ++count;
        double r = static_cast<double>(count) / static_cast<double>(n);
        CHECK(p.running_ratio[static_cast<std::size_t>(n - 1)] == r);
        if (n >= p.tail_start) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    CHECK(p.lower_est == lo);
    CHECK(p.upper_est == hi);
    CHECK(std::abs(p.upper_est - 2.0 / 3.0) <= 0.01);
    CHECK(std::abs(p.lower_est - 1.0 / 3.0) <= 0.01);
}

TEST_CASE("the empty set has density zero and a full tail window collapses the range") {
    IntegerSet empty;
    empty.horizon = 50;
    DensityProfile p = density_profile(empty);
    CHECK(p.lower_est == 0.0);
    CHECK(p.upper_est == 0.0);

    DensityProfile q = density_profile(multiples(2, 10), 1.0);
    CHECK(q.tail_start == 10);
    CHECK(q.lower_est == 0.5);
    CHECK(q.upper_est == 0.5);
}

TEST_CASE("density profile rejects short horizons and bad tail fractions") {
    CHECK_THROWS_AS(density_profile(multiples(2, 5)), HorizonTooShort);
    CHECK_THROWS_AS(density_profile(multiples(2, 100), 0.0), ValidationError);
    CHECK_THROWS_AS(density_profile(multiples(2, 100), 1.5), ValidationError);
    CHECK_THROWS_AS(density_profile(multiples(2, 100), -0.5), ValidationError);
}

TEST_CASE("visit sets pick out the steps inside the radius or band") {
    OperatorSpec op = OperatorSpec::backward_shift(WeightSpec::constant(2.0), false);
    VisitRecord rec = orbit(op, SparseVector::unit(10), 15, SpaceTag::c0());

    IntegerSet close = visit_set(rec, 4.0);
    CHECK(close.elements == std::vector<std::int64_t>{1, 2, 11, 12, 13, 14, 15});
    CHECK(close.horizon == 15);

    IntegerSet band = band_visit_set(rec, 1.0, 1000.0);
    CHECK(band.elements == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});

    CHECK_THROWS_AS(visit_set(VisitRecord{}, 1.0), HorizonTooShort);
    CHECK_THROWS_AS(band_visit_set(VisitRecord{}, 0.0, 1.0), HorizonTooShort);
}

TEST_CASE("parity orbit splits exactly into a ball part and an annulus part") {
    SparseVector x0;
    x0.set(0, Complex(1.6, 0.0));
    VisitRecord rec = orbit(br_parity_shift(), x0, 100000, SpaceTag::c0(true));
    for (std::int64_t i = 1; i <= 100000; ++i) {
        double want = (i % 2 == 1) ? 1.6 : 0.8;  // distance-to-odds weight profile
        CHECK(rec.norms[static_cast<std::size_t>(i - 1)] == want);
    }

    DensityProfile ball1 = density_profile(visit_set(rec, 1.0));
    DensityProfile ball2 = density_profile(visit_set(rec, 2.0));
    DensityProfile annulus = density_profile(band_visit_set(rec, 1.0, 2.0));
    CHECK(ball2.upper_est == 1.0);
    CHECK(ball2.lower_est == 1.0);
    CHECK(ball1.upper_est == 0.5);
    CHECK(annulus.lower_est == 0.5);
    // upper density of the union dominates upper + lower of the split parts
    CHECK(ball2.upper_est >= ball1.upper_est + annulus.lower_est - 1e-12);
}

TEST_CASE("visit densities are monotone in the radius") {
    SparseVector x0;
    x0.set(0, Complex(1.6, 0.0));
    VisitRecord rec = orbit(br_parity_shift(), x0, 5000, SpaceTag::c0(true));
    double prev_lo = -1.0, prev_hi = -1.0;
    for (double r : {0.5, 0.99, 1.5, 2.0}) {
        DensityProfile p = density_profile(visit_set(rec, r));
        CHECK(p.lower_est >= prev_lo);
        CHECK(p.upper_est >= prev_hi);
        prev_lo = p.lower_est;
        prev_hi = p.upper_est;
    }
}

TEST_CASE("shifted unions thicken a set by a bounded look-ahead") {
    DensityProfile evens1 = shifted_union_density(multiples(2, 100000), 1);
    CHECK(evens1.lower_est == 1.0);
    CHECK(evens1.upper_est == 1.0);

    DensityProfile thirds = shifted_union_density(multiples(3, 99999), 1);
    CHECK(std::abs(thirds.upper_est - 2.0 / 3.0) <= 0.01);
    CHECK(std::abs(thirds.lower_est - 2.0 / 3.0) <= 0.01);

    IntegerSet s = multiples(2, 5000);
    DensityProfile base = density_profile(s);
    DensityProfile zero = shifted_union_density(s, 0);
    CHECK(zero.lower_est == base.lower_est);
    CHECK(zero.upper_est == base.upper_est);
    CHECK(zero.tail_start == base.tail_start);
    CHECK(zero.running_ratio == base.running_ratio);

    CHECK_THROWS_AS(shifted_union_density(s, -1), ValidationError);
    CHECK_THROWS_AS(shifted_union_density(multiples(2, 15), 10), HorizonTooShort);
}

TEST_CASE("a pure rotation visits every ball containing its circle") {
    SamplerSpec sampler;
    sampler.kind = SamplerSpec::Kind::PinnedCoordinate;
    sampler.lo = 0;
    sampler.hi = 0;
    OperatorSpec op = OperatorSpec::block_diag({std::sqrt(2.0) - 1.0});
    CEstimate est = estimate_c(op, sampler, {1.5}, 100, 3, SpaceTag::c0(), 7);
    CHECK(est.value == 1.0);
    REQUIRE(est.per_trial.size() == 3);
    for (const auto& row : est.per_trial) {
        CHECK(row.upper_est == 1.0);
        CHECK(row.lower_est == 1.0);
        CHECK_FALSE(row.overflow);
    }
}

TEST_CASE("the designed bilateral shift pins the visit parameter near one half") {
    SamplerSpec sampler;
    sampler.kind = SamplerSpec::Kind::PinnedCoordinate;
    sampler.lo = -3;
    sampler.hi = 0;
    sampler.amplitude = 0.5;
    CEstimate est =
        estimate_c(br_parity_shift(), sampler, {0.99}, 20000, 4, SpaceTag::c0(true), 11);
    CHECK(est.value <= 0.52);
    CHECK(est.value >= 0.49);
}

TEST_CASE("a dying eigenvector mixture visits small balls with near-full density") {
    OperatorSpec op = OperatorSpec::backward_shift(WeightSpec::constant(2.0), false);
    SamplerSpec sampler;
    sampler.kind = SamplerSpec::Kind::SteinhausSeries;
    for (double theta : {std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0}) {
        Complex lambda = std::polar(1.0, 2.0 * Rng::pi() * theta);
        sampler.directions.push_back(eigenvector_field(op, lambda).vector);
    }
    CEstimate est = estimate_c(op, sampler, {8.0}, 20000, 4, SpaceTag::c0(), 2);
    CHECK(est.value >= 0.8);
}

TEST_CASE("trial rows do not depend on the thread count") {
    SamplerSpec sampler;
    sampler.kind = SamplerSpec::Kind::PinnedCoordinate;
    sampler.lo = -3;
    sampler.hi = 0;
    CEstimate a =
        estimate_c(br_parity_shift(), sampler, {0.99, 1.7}, 500, 6, SpaceTag::c0(true), 3, 1);
    CEstimate b =
        estimate_c(br_parity_shift(), sampler, {0.99, 1.7}, 500, 6, SpaceTag::c0(true), 3, 4);
    REQUIRE(a.per_trial.size() == b.per_trial.size());
    for (std::size_t k = 0; k < a.per_trial.size(); ++k) {
        CHECK(a.per_trial[k].trial == b.per_trial[k].trial);
        CHECK(a.per_trial[k].seed == b.per_trial[k].seed);
        CHECK(a.per_trial[k].radius == b.per_trial[k].radius);
        CHECK(a.per_trial[k].upper_est == b.per_trial[k].upper_est);
        CHECK(a.per_trial[k].lower_est == b.per_trial[k].lower_est);
        CHECK(a.per_trial[k].overflow == b.per_trial[k].overflow);
    }
    CHECK(a.value == b.value);
    CHECK(c_estimate_csv(a) == c_estimate_csv(b));
}

TEST_CASE("the trial table serializes deterministically with a fixed header") {
    SamplerSpec sampler;
    sampler.kind = SamplerSpec::Kind::PinnedCoordinate;
    sampler.lo = -3;
    sampler.hi = 0;
    CEstimate est =
        estimate_c(br_parity_shift(), sampler, {0.99}, 200, 2, SpaceTag::c0(true), 9);
    std::string csv = c_estimate_csv(est);
    CHECK(csv.rfind("trial,seed,radius,upper_est,lower_est,overflow_flag\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
    CHECK(csv == c_estimate_csv(est));
}

TEST_CASE("orbits that blow up mark every affected trial row") {
    OperatorSpec op = OperatorSpec::backward_shift(WeightSpec::constant(4.0), false);
    SamplerSpec sampler;
    sampler.kind = SamplerSpec::Kind::SteinhausSeries;
    sampler.directions.push_back(SparseVector::unit(600));
    CEstimate est = estimate_c(op, sampler, {0.5}, 600, 2, SpaceTag::c0(), 5);
    REQUIRE(est.per_trial.size() == 2);
    for (const auto& row : est.per_trial) {
        CHECK(row.overflow);
        CHECK(row.upper_est == 0.0);
    }
    CHECK(est.value == 0.0);
}

TEST_CASE("the estimator rejects degenerate parameters") {
    SamplerSpec sampler;
    sampler.kind = SamplerSpec::Kind::PinnedCoordinate;
    OperatorSpec op = br_parity_shift();
    CHECK_THROWS_AS(estimate_c(op, sampler, {1.0}, 100, 0, SpaceTag::c0(true), 1),
                    ValidationError);
    CHECK_THROWS_AS(estimate_c(op, sampler, {}, 100, 2, SpaceTag::c0(true), 1),
                    ValidationError);
    CHECK_THROWS_AS(estimate_c(op, sampler, {1.0}, 5, 2, SpaceTag::c0(true), 1),
                    HorizonTooShort);
}
