#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ergolin/measures.hpp"
#include "ergolin/rng.hpp"
#include "ergolin/steinhaus.hpp"

#include "helpers.hpp"

using namespace ergolin;
using testutil::brute_force_w1;
using testutil::uniform_measure;

namespace {

const SpaceTag kC0 = SpaceTag::c0();

SparseVector scaled_unit(std::int64_t index, Complex value) {
    SparseVector v;
    v.set(index, value);
    return v;
}

EmpiricalMeasure delta(const SparseVector& atom) {
    return measure_from_atoms({atom}, {}, kC0);
}

OperatorSpec golden_rotation() {
    return OperatorSpec::block_diag({(std::sqrt(5.0) - 1.0) / 2.0});
}

}  // namespace

TEST_CASE("measure construction validates shapes, weights and windows") {
    CHECK_THROWS_AS(measure_from_atoms({}, {}, kC0), ShapeMismatch);
    CHECK_THROWS_AS(measure_from_atoms({SparseVector{}}, {0.5, 0.5}, kC0), ShapeMismatch);
    CHECK_THROWS_AS(measure_from_atoms({SparseVector{}, SparseVector{}}, {-1.0, 3.0}, kC0),
                    ValidationError);

    // unnormalized positive weights are rescaled to total mass one
    EmpiricalMeasure mu =
        measure_from_atoms({SparseVector::unit(0), SparseVector::unit(1)}, {2.0, 2.0}, kC0);
    CHECK(mu.weights == std::vector<double>{0.5, 0.5});

    EmpiricalMeasure manual = mu;
    manual.atoms[0] = SparseVector::unit(99);  // outside the default window
    CHECK_THROWS_AS(manual.validate(), ValidationError);
}

TEST_CASE("atoms are stored truncated while full norms survive as metadata") {
    SparseVector far;
    far.set(0, Complex(1.0, 0.0));
    far.set(100, Complex(5.0, 0.0));
    EmpiricalMeasure mu = measure_from_atoms({far}, {}, kC0);
    CHECK(mu.atoms[0].support_size() == 1);
    CHECK(mu.atoms[0].at(0) == Complex(1.0, 0.0));
    CHECK(mu.atom_norms[0] == 5.0);
}

TEST_CASE("orbit averages of periodic points are the periodic orbit measures") {
    OperatorSpec rot2 = OperatorSpec::block_diag({0.5});
    SparseVector a = SparseVector::unit(0);
    EmpiricalMeasure mu = birkhoff_measure(rot2, a, 2, kC0);
    REQUIRE(mu.size() == 2);
    CHECK(mu.atoms[0].at(0) == Complex(-1.0, 0.0));
    CHECK(mu.atoms[1].at(0) == Complex(1.0, 0.0));
    CHECK(mu.weights == std::vector<double>{0.5, 0.5});

    // fixed point: every Cesaro atom equals the point itself
    OperatorSpec id = OperatorSpec::block_diag({0.0});
    EmpiricalMeasure nu = birkhoff_measure(id, a, 5, kC0);
    for (const auto& atom : nu.atoms) CHECK(atom == a);

    CHECK_THROWS_AS(birkhoff_measure(rot2, a, 0, kC0), ValidationError);

    OperatorSpec big = OperatorSpec::backward_shift(WeightSpec::constant(4.0), false);
    CHECK_THROWS_AS(
        birkhoff_measure(big, scaled_unit(600, Complex(1e250, 0.0)), 200, kC0),
        OverflowDetected);
}

TEST_CASE("dilation scales atoms and norms and composes exactly") {
    Rng rng(5);
    std::vector<SparseVector> atoms;
    for (int k = 0; k < 6; ++k) atoms.push_back(testutil::random_vector(rng, -4, 4, 4));
    EmpiricalMeasure mu = uniform_measure(atoms, SpaceTag::c0(true));

    CHECK(measure_multiset_equal(dilate(mu, 1.0), mu));
    CHECK(measure_multiset_equal(dilate(dilate(mu, 2.0), 0.5), mu));
    CHECK_THROWS_AS(dilate(mu, 0.0), ValidationError);
    CHECK_THROWS_AS(dilate(mu, -2.0), ValidationError);

    EmpiricalMeasure d = dilate(delta(SparseVector::unit(0)), 3.0);
    CHECK(d.atoms[0].at(0) == Complex(3.0, 0.0));
    CHECK(d.atom_norms[0] == 3.0);
}

TEST_CASE("doubling every atom doubles the transport distance bitwise") {
    Rng rng(6);
    std::vector<SparseVector> xs, ys;
    for (int k = 0; k < 4; ++k) {
        xs.push_back(testutil::random_vector(rng, -3, 3, 4));
        ys.push_back(testutil::random_vector(rng, -3, 3, 4));
    }
    EmpiricalMeasure mu = uniform_measure(xs, SpaceTag::c0(true));
    EmpiricalMeasure nu = uniform_measure(ys, SpaceTag::c0(true));
    IndexWindow dims{-3, 3};
    double base = wasserstein1(mu, nu, dims, TransportMethod::ExactAssignment).value;
    double doubled =
        wasserstein1(dilate(mu, 2.0), dilate(nu, 2.0), dims, TransportMethod::ExactAssignment)
            .value;
    CHECK(doubled == 2.0 * base);
}

TEST_CASE("convolution with a point mass at zero is the identity") {
    Rng rng(7);
    std::vector<SparseVector> atoms;
    for (int k = 0; k < 5; ++k) atoms.push_back(testutil::random_vector(rng, -2, 2, 3));
    EmpiricalMeasure mu = uniform_measure(atoms, SpaceTag::c0(true));
    EmpiricalMeasure zero = measure_from_atoms({SparseVector{}}, {}, SpaceTag::c0(true));
    CHECK(measure_multiset_equal(convolve(mu, zero, ConvolveMode::FullProduct), mu));
    CHECK(measure_multiset_equal(convolve(zero, mu, ConvolveMode::FullProduct), mu));

    EmpiricalMeasure d1 = delta(SparseVector::unit(0));
    EmpiricalMeasure d2 = delta(SparseVector::unit(1));
    EmpiricalMeasure sum = convolve(d1, d2, ConvolveMode::FullProduct);
    REQUIRE(sum.size() == 1);
    CHECK(sum.atoms[0].at(0) == Complex(1.0, 0.0));
    CHECK(sum.atoms[0].at(1) == Complex(1.0, 0.0));
}

TEST_CASE("coinciding convolution sums aggregate their weights") {
    EmpiricalMeasure pm = uniform_measure(
        {SparseVector::unit(0), scaled_unit(0, Complex(-1.0, 0.0))}, kC0);
    EmpiricalMeasure sq = convolve(pm, pm, ConvolveMode::FullProduct);
    REQUIRE(sq.size() == 3);
    double w_plus2 = 0.0, w_zero = 0.0, w_minus2 = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        Complex c = sq.atoms[i].at(0);
        if (c == Complex(2.0, 0.0)) w_plus2 = sq.weights[i];
        if (c == Complex(0.0, 0.0)) w_zero = sq.weights[i];
        if (c == Complex(-2.0, 0.0)) w_minus2 = sq.weights[i];
    }
    CHECK(w_plus2 == 0.25);
    CHECK(w_zero == 0.5);
    CHECK(w_minus2 == 0.25);
}

TEST_CASE("convolution is commutative and respects domains") {
    Rng rng(8);
    std::vector<SparseVector> xs, ys;
    for (int k = 0; k < 3; ++k) {
        xs.push_back(testutil::random_vector(rng, -2, 2, 3));
        ys.push_back(testutil::random_vector(rng, -2, 2, 3));
    }
    EmpiricalMeasure mu = uniform_measure(xs, SpaceTag::c0(true));
    EmpiricalMeasure nu = uniform_measure(ys, SpaceTag::c0(true));
    CHECK(measure_multiset_equal(convolve(mu, nu, ConvolveMode::FullProduct),
                                 convolve(nu, mu, ConvolveMode::FullProduct)));

    EmpiricalMeasure lp = uniform_measure(xs, SpaceTag::lp(2.0, true));
    CHECK_THROWS_AS(convolve(mu, lp), IncompatibleDomain);
    EmpiricalMeasure narrow = uniform_measure(ys, SpaceTag::c0(true), ProjectionWindow{0, 4});
    CHECK_THROWS_AS(convolve(mu, narrow), IncompatibleDomain);
}

TEST_CASE("oversized products refuse or fall back to subsampling") {
    std::vector<SparseVector> many;
    many.reserve(1001);
    for (int k = 0; k < 1001; ++k) {
        many.push_back(scaled_unit(0, Complex(1.0 + k, 0.0)));
    }
    EmpiricalMeasure mu = uniform_measure(many, kC0);
    CHECK_THROWS_AS(convolve(mu, mu, ConvolveMode::FullProduct), ProductTooLarge);

    EmpiricalMeasure via_auto = convolve(mu, mu, ConvolveMode::Auto);
    CHECK(via_auto.size() == 100000);

    EmpiricalMeasure a = convolve(mu, mu, ConvolveMode::Subsample, 500, 42);
    EmpiricalMeasure b = convolve(mu, mu, ConvolveMode::Subsample, 500, 42);
    CHECK(a.size() == 500);
    CHECK(measure_multiset_equal(a, b));
    CHECK_THROWS_AS(convolve(mu, mu, ConvolveMode::Subsample, 0, 42), ValidationError);
}

TEST_CASE("auto mode matches the full product below the cap") {
    Rng rng(9);
    std::vector<SparseVector> xs, ys;
    for (int k = 0; k < 4; ++k) {
        xs.push_back(testutil::random_vector(rng, -2, 2, 3));
        ys.push_back(testutil::random_vector(rng, -2, 2, 3));
    }
    EmpiricalMeasure mu = uniform_measure(xs, SpaceTag::c0(true));
    EmpiricalMeasure nu = uniform_measure(ys, SpaceTag::c0(true));
    CHECK(measure_multiset_equal(convolve(mu, nu, ConvolveMode::Auto),
                                 convolve(mu, nu, ConvolveMode::FullProduct)));
}

TEST_CASE("pushforward maps atoms and keeps weights") {
    OperatorSpec shift1 = OperatorSpec::backward_shift(WeightSpec::constant(1.0), false);
    EmpiricalMeasure d = pushforward(shift1, delta(SparseVector::unit(1)));
    REQUIRE(d.size() == 1);
    CHECK(d.atoms[0] == SparseVector::unit(0));

    // the quarter-turn orbit measure is exactly invariant
    OperatorSpec rot = OperatorSpec::block_diag({0.25});
    EmpiricalMeasure orbit4 = birkhoff_measure(rot, SparseVector::unit(0), 4, kC0);
    CHECK(measure_multiset_equal(pushforward(rot, orbit4), orbit4));
}

TEST_CASE("pushforward commutes with convolution") {
    OperatorSpec op = OperatorSpec::backward_shift(WeightSpec::constant(2.0), false);
    Rng rng(10);
    std::vector<SparseVector> xs, ys;
    for (int k = 0; k < 3; ++k) {
        xs.push_back(testutil::random_vector(rng, 0, 4, 3));
        ys.push_back(testutil::random_vector(rng, 0, 4, 3));
    }
    EmpiricalMeasure mu = uniform_measure(xs, kC0);
    EmpiricalMeasure nu = uniform_measure(ys, kC0);
    CHECK(measure_multiset_equal(
        pushforward(op, convolve(mu, nu, ConvolveMode::FullProduct)),
        convolve(pushforward(op, mu), pushforward(op, nu), ConvolveMode::FullProduct)));
}

TEST_CASE("exact transport distances match hand values") {
    EmpiricalMeasure d0 = delta(SparseVector{});
    EmpiricalMeasure d34 = delta(scaled_unit(0, Complex(3.0, 4.0)));
    IndexWindow dims{0, 0};
    CHECK(wasserstein1(d0, d34, dims, TransportMethod::ExactAssignment).value == 5.0);

    EmpiricalMeasure two_a = uniform_measure({SparseVector{}, SparseVector::unit(0)}, kC0);
    EmpiricalMeasure two_b =
        uniform_measure({SparseVector{}, scaled_unit(0, Complex(2.0, 0.0))}, kC0);
    CHECK(wasserstein1(two_a, two_b, dims, TransportMethod::ExactAssignment).value == 0.5);

    CHECK(wasserstein1(two_a, two_a, dims, TransportMethod::ExactAssignment).value == 0.0);
    CHECK(wasserstein1(two_a, two_a, dims, TransportMethod::ExactAssignment).std_error == 0.0);
}

TEST_CASE("the assignment solver agrees with all-permutation enumeration") {
    const std::pair<int, int> shapes[] = {{1, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 6},
                                          {4, 8}, {8, 8}, {1, 5}, {7, 7}, {3, 3}};
    IndexWindow dims{-2, 2};
    Rng rng(11);
    for (int rep = 0; rep < 2; ++rep) {
        for (auto [na, nb] : shapes) {
            std::vector<SparseVector> xs, ys;
            for (int k = 0; k < na; ++k) xs.push_back(testutil::random_vector(rng, -2, 2, 3));
            for (int k = 0; k < nb; ++k) ys.push_back(testutil::random_vector(rng, -2, 2, 3));
            EmpiricalMeasure mu = uniform_measure(xs, SpaceTag::c0(true));
            EmpiricalMeasure nu = uniform_measure(ys, SpaceTag::c0(true));
            double got = wasserstein1(mu, nu, dims, TransportMethod::ExactAssignment).value;
            double want = brute_force_w1(mu, nu, dims);
            CHECK(std::abs(got - want) <= 1e-9);
        }
    }
}

TEST_CASE("exact transport enforces uniform weights and the replication cap") {
    EmpiricalMeasure lop =
        measure_from_atoms({SparseVector{}, SparseVector::unit(0)}, {0.25, 0.75}, kC0);
    EmpiricalMeasure uni = uniform_measure({SparseVector{}, SparseVector::unit(0)}, kC0);
    IndexWindow dims{0, 0};
    CHECK_THROWS_AS(wasserstein1(lop, uni, dims, TransportMethod::ExactAssignment),
                    ShapeMismatch);

    std::vector<SparseVector> a25, b41;
    for (int k = 0; k < 25; ++k) a25.push_back(scaled_unit(0, Complex(k, 0.0)));
    for (int k = 0; k < 41; ++k) b41.push_back(scaled_unit(0, Complex(k, 1.0)));
    CHECK_THROWS_AS(wasserstein1(uniform_measure(a25, kC0), uniform_measure(b41, kC0), dims,
                                 TransportMethod::ExactAssignment),
                    ShapeMismatch);
    CHECK_THROWS_AS(wasserstein1(uni, uni, IndexWindow{2, 0}, TransportMethod::ExactAssignment),
                    ValidationError);
}

TEST_CASE("transport is a symmetric pseudometric on atom clouds") {
    Rng rng(12);
    IndexWindow dims{-2, 2};
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<SparseVector> xs, ys, zs;
        for (int k = 0; k < 4; ++k) {
            xs.push_back(testutil::random_vector(rng, -2, 2, 3));
            ys.push_back(testutil::random_vector(rng, -2, 2, 3));
            zs.push_back(testutil::random_vector(rng, -2, 2, 3));
        }
        EmpiricalMeasure mu = uniform_measure(xs, SpaceTag::c0(true));
        EmpiricalMeasure nu = uniform_measure(ys, SpaceTag::c0(true));
        EmpiricalMeasure rho = uniform_measure(zs, SpaceTag::c0(true));
        double ab = wasserstein1(mu, nu, dims, TransportMethod::ExactAssignment).value;
        double ba = wasserstein1(nu, mu, dims, TransportMethod::ExactAssignment).value;
        CHECK(ab == ba);
        CHECK(wasserstein1(mu, mu, dims, TransportMethod::ExactAssignment).value == 0.0);
        double ac = wasserstein1(mu, rho, dims, TransportMethod::ExactAssignment).value;
        double cb = wasserstein1(rho, nu, dims, TransportMethod::ExactAssignment).value;
        CHECK(ab <= ac + cb + 1e-9);
    }
}

TEST_CASE("sliced transport is deterministic, thread-stable and below the exact value") {
    Rng rng(13);
    std::vector<SparseVector> xs, ys;
    for (int k = 0; k < 12; ++k) {
        xs.push_back(testutil::random_vector(rng, -2, 2, 3));
        ys.push_back(testutil::random_vector(rng, -2, 2, 3));
    }
    EmpiricalMeasure mu = uniform_measure(xs, SpaceTag::c0(true));
    EmpiricalMeasure nu = uniform_measure(ys, SpaceTag::c0(true));
    IndexWindow dims{-2, 2};

    W1Result s1 = wasserstein1(mu, nu, dims, TransportMethod::Sliced, 128, 5, 1);
    W1Result s2 = wasserstein1(mu, nu, dims, TransportMethod::Sliced, 128, 5, 4);
    CHECK(s1.value == s2.value);
    CHECK(s1.std_error == s2.std_error);
    CHECK(s1.std_error > 0.0);

    double exact = wasserstein1(mu, nu, dims, TransportMethod::ExactAssignment).value;
    CHECK(s1.value <= exact + 1e-9);  // projections contract distances

    W1Result self = wasserstein1(mu, mu, dims, TransportMethod::Sliced, 64, 5);
    CHECK(self.value == 0.0);
    CHECK(self.std_error == 0.0);

    CHECK_THROWS_AS(wasserstein1(mu, nu, dims, TransportMethod::Sliced, 1, 5),
                    ValidationError);
}

TEST_CASE("invariance defect vanishes on invariant measures and is explicit on deltas") {
    OperatorSpec rot = OperatorSpec::block_diag({0.25});
    EmpiricalMeasure orbit4 = birkhoff_measure(rot, SparseVector::unit(0), 4, kC0);
    CHECK(invariance_defect(rot, orbit4, IndexWindow{0, 0},
                            TransportMethod::ExactAssignment)
              .value == 0.0);

    OperatorSpec rot3 = OperatorSpec::block_diag({1.0 / 3.0});
    EmpiricalMeasure orbit3 = birkhoff_measure(rot3, SparseVector::unit(0), 3, kC0);
    CHECK(invariance_defect(rot3, orbit3, IndexWindow{0, 0},
                            TransportMethod::ExactAssignment)
              .value <= 1e-10);

    OperatorSpec shift1 = OperatorSpec::backward_shift(WeightSpec::constant(1.0), false);
    double defect = invariance_defect(shift1, delta(SparseVector::unit(1)), IndexWindow{0, 1},
                                      TransportMethod::ExactAssignment)
                        .value;
    CHECK(defect == std::sqrt(2.0));
}

TEST_CASE("long rotation averages are nearly invariant") {
    EmpiricalMeasure mu = birkhoff_measure(golden_rotation(), SparseVector::unit(0), 10000, kC0);
    double defect = invariance_defect(golden_rotation(), mu, IndexWindow{0, 0},
                                      TransportMethod::Sliced, 256, 1)
                        .value;
    CHECK(defect <= 4.0 * Rng::pi() / 10000.0);
}

TEST_CASE("rotation averages converge to the circle law in transport distance") {
    EmpiricalMeasure ref =
        birkhoff_measure(golden_rotation(), SparseVector::unit(0), 1024, kC0);
    IndexWindow dims{0, 0};
    double prev = HUGE_VAL;
    for (std::int64_t N : {8, 64, 512}) {
        EmpiricalMeasure mu = birkhoff_measure(golden_rotation(), SparseVector::unit(0), N, kC0);
        double w1 = wasserstein1(mu, ref, dims, TransportMethod::ExactAssignment).value;
        CHECK(w1 < prev);
        prev = w1;
    }
    CHECK(prev <= 0.02);
}

TEST_CASE("markov tail bounds hold with exact hand values") {
    MarkovReport at_zero = markov_tail_check(delta(SparseVector{}), 2.0, 1.0);
    CHECK(at_zero.lhs == 0.0);
    CHECK(at_zero.rhs == 0.0);
    CHECK(at_zero.pass);

    EmpiricalMeasure pair = uniform_measure(
        {SparseVector::unit(0), scaled_unit(0, Complex(3.0, 0.0))}, kC0);
    MarkovReport rep = markov_tail_check(pair, 2.0, 2.0);
    CHECK(rep.lhs == 0.5);
    CHECK(rep.rhs == 1.25);
    CHECK(rep.pass);

    CHECK_THROWS_AS(markov_tail_check(pair, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(markov_tail_check(pair, 2.0, 0.0), ValidationError);
}

TEST_CASE("markov tail bounds hold across a random measure corpus") {
    OperatorSpec op = OperatorSpec::backward_shift(WeightSpec::constant(2.0), false);
    EigenvectorData e1 = eigen_from_shift(op, std::sqrt(2.0) - 1.0);
    EigenvectorData e2 = eigen_from_shift(op, std::sqrt(3.0) - 1.0);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        EmpiricalMeasure mu = sample_steinhaus({e1, e2}, 40, kC0, seed);
        for (double p : {1.0, 2.0, 4.0}) {
            for (double alpha : {0.5, 1.0, 2.0}) {
                CHECK(markov_tail_check(mu, p, alpha).pass);
            }
        }
    }
}

TEST_CASE("support coverage counts reference balls that carry mass") {
    EmpiricalMeasure d0 = delta(SparseVector{});
    std::vector<CoverageBall> balls = {{SparseVector{}, 0.5}, {SparseVector::unit(0), 0.5}};
    CHECK(support_coverage(d0, balls) == 0.5);

    EmpiricalMeasure pair = uniform_measure({SparseVector{}, SparseVector::unit(0)}, kC0);
    CHECK(support_coverage(pair, balls) == 1.0);
    CHECK_THROWS_AS(support_coverage(pair, {}), ValidationError);
}

TEST_CASE("random-phase eigenvector samples spread over their support") {
    OperatorSpec op = OperatorSpec::backward_shift(WeightSpec::constant(2.0), false);
    EigenvectorData e1 = eigen_from_shift(op, std::sqrt(2.0) - 1.0);
    EigenvectorData e2 = eigen_from_shift(op, std::sqrt(3.0) - 1.0);
    EmpiricalMeasure mu = sample_steinhaus({e1, e2}, 500, kC0, 21);
    EmpiricalMeasure probes = sample_steinhaus({e1, e2}, 20, kC0, 22);
    std::vector<CoverageBall> balls;
    for (const auto& c : probes.atoms) balls.push_back({c, 2.0});
    CHECK(support_coverage(mu, balls) >= 0.9);
}

TEST_CASE("multiset equality distinguishes atoms and weights") {
    EmpiricalMeasure a = uniform_measure({SparseVector{}, SparseVector::unit(0)}, kC0);
    EmpiricalMeasure b = uniform_measure({SparseVector::unit(0), SparseVector{}}, kC0);
    CHECK(measure_multiset_equal(a, b));  // order-insensitive

    EmpiricalMeasure c = uniform_measure({SparseVector{}, SparseVector::unit(1)}, kC0);
    CHECK_FALSE(measure_multiset_equal(a, c));

    EmpiricalMeasure d =
        measure_from_atoms({SparseVector{}, SparseVector::unit(0)}, {0.25, 0.75}, kC0);
    CHECK_FALSE(measure_multiset_equal(a, d));
    CHECK_FALSE(measure_multiset_equal(a, delta(SparseVector{})));
}

TEST_CASE("measures survive a json round trip bit for bit") {
    Rng rng(14);
    std::vector<SparseVector> atoms;
    for (int k = 0; k < 5; ++k) atoms.push_back(testutil::random_vector(rng, -4, 4, 4));
    atoms.push_back(scaled_unit(-2, Complex(1e-250, 3.5)));
    EmpiricalMeasure mu =
        measure_from_atoms(atoms, {0.1, 0.2, 0.3, 0.1, 0.15, 0.15}, SpaceTag::c0(true));

    json j = json::parse(measure_to_json(mu).dump());
    EmpiricalMeasure back = measure_from_json(j);
    CHECK(back.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK(back.atoms[i] == mu.atoms[i]);
        CHECK(back.weights[i] == mu.weights[i]);
        CHECK(back.atom_norms[i] == mu.atom_norms[i]);
    }
    CHECK(back.window.lo == mu.window.lo);
    CHECK(back.window.hi == mu.window.hi);
    CHECK(back.space == mu.space);
}
