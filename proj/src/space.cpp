#include "ergolin/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ergolin {

void check_space_support(const SparseVector& v, const SpaceTag& space) {
    if (!space.bilateral && !v.empty() && v.min_index() < 0) {
        throw IncompatibleDomain("negative index in a unilateral space");
    }
}

double norm(const SparseVector& v, const SpaceTag& space) {
    if (v.empty()) return 0.0;
    if (space.is_c0()) {
        double m = 0.0;
        for (const auto& [i, c] : v.entries()) m = std::max(m, std::abs(c));
        return m;
    }
    // Scaled p-sum; plain accumulation of |x|^p overflows near 1e250 already
    // for p = 2, and witness vectors do reach such magnitudes.
    double scale = 0.0;
    for (const auto& [i, c] : v.entries()) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& [i, c] : v.entries()) {
        acc += std::pow(std::abs(c) / scale, space.p);
    }
    return scale * std::pow(acc, 1.0 / space.p);
}

SparseVector combine(Complex alpha, const SparseVector& x, Complex beta, const SparseVector& y) {
    SparseVector out;
    for (const auto& [i, c] : x.entries()) out.set(i, alpha * c);
    for (const auto& [i, c] : y.entries()) out.add(i, beta * c);
    return out;
}

TruncateResult truncate(const SparseVector& v, IndexWindow window, const SpaceTag& space) {
    if (window.lo > window.hi) throw ValidationError("truncate window lo > hi");
    SparseVector kept, dropped;
    for (const auto& [i, c] : v.entries()) {
        (window.contains(i) ? kept : dropped).set(i, c);
    }
    return {std::move(kept), norm(dropped, space)};
}

json space_to_json(const SpaceTag& space) {
    json j;
    j["kind"] = space.is_c0() ? "c0" : "lp";
    j["bilateral"] = space.bilateral;
    if (!space.is_c0()) j["p"] = space.p;
    return j;
}

SpaceTag space_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    bool bilateral = j.at("bilateral").get<bool>();
    if (kind == "c0") return SpaceTag::c0(bilateral);
    if (kind == "lp") return SpaceTag::lp(j.at("p").get<double>(), bilateral);
    throw ValidationError("unknown space kind: " + kind);
}

json vector_to_json(const SparseVector& v, const SpaceTag& space) {
    json entries = json::array();
    for (const auto& [i, c] : v.entries()) {
        entries.push_back(json::array({i, c.real(), c.imag()}));
    }
    json j;
    j["space"] = space_to_json(space);
    j["entries"] = std::move(entries);
    return j;
}

std::pair<SparseVector, SpaceTag> vector_from_json(const json& j) {
    SpaceTag space = space_from_json(j.at("space"));
    SparseVector v;
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 3) throw ValidationError("malformed vector entry");
        v.set(e[0].get<std::int64_t>(), Complex(e[1].get<double>(), e[2].get<double>()));
    }
    check_space_support(v, space);
    return {std::move(v), space};
}

std::uint64_t vector_digest(const SparseVector& v) {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](const void* p, std::size_t n) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (std::size_t k = 0; k < n; ++k) {
            h ^= b[k];
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [i, c] : v.entries()) {
        double re = c.real(), im = c.imag();
        feed(&i, sizeof i);
        feed(&re, sizeof re);
        feed(&im, sizeof im);
    }
    return h;
}

}  // namespace ergolin
