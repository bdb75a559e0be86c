#pragma once

// Sparse complex sequences over signed 64-bit indices, together with the
// ambient-space descriptor (c0 or lp, unilateral or bilateral) that fixes
// which norm is meant and whether negative indices are legal.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "json.hpp"

#include "ergolin/errors.hpp"

namespace ergolin {

using Complex = std::complex<double>;
using json = nlohmann::json;

// Entries with modulus below this are dropped on write. Deliberately far
// below machine epsilon: witness vectors carry coordinates near 1e-200 that
// later weight products amplify back to order one.
inline constexpr double kZeroDrop = 1e-300;

struct SpaceTag {
    enum class Kind { C0, Lp };
    Kind kind = Kind::C0;
    bool bilateral = false;
    double p = 2.0;  // only meaningful for Lp

    static SpaceTag c0(bool bilateral = false) { return {Kind::C0, bilateral, 2.0}; }
    static SpaceTag lp(double p, bool bilateral = false) {
        if (!(p >= 1.0)) throw ValidationError("lp space requires p >= 1");
        return {Kind::Lp, bilateral, p};
    }
    bool is_c0() const { return kind == Kind::C0; }
    bool operator==(const SpaceTag& o) const {
        return kind == o.kind && bilateral == o.bilateral && (kind == Kind::C0 || p == o.p);
    }
};

struct IndexWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;  // inclusive
    bool contains(std::int64_t i) const { return i >= lo && i <= hi; }
};

class SparseVector {
public:
    using Map = std::map<std::int64_t, Complex>;

    SparseVector() = default;

    static SparseVector unit(std::int64_t index) {
        SparseVector v;
        v.set(index, Complex(1.0, 0.0));
        return v;
    }

    void set(std::int64_t index, Complex value) {
        if (std::abs(value) < kZeroDrop) {
            entries_.erase(index);
        } else {
            entries_[index] = value;
        }
    }

    void add(std::int64_t index, Complex value) { set(index, at(index) + value); }

    Complex at(std::int64_t index) const {
        auto it = entries_.find(index);
        return it == entries_.end() ? Complex(0.0, 0.0) : it->second;
    }

    const Map& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::int64_t min_index() const {
        if (empty()) throw Error("min_index of empty vector");
        return entries_.begin()->first;
    }
    std::int64_t max_index() const {
        if (empty()) throw Error("max_index of empty vector");
        return entries_.rbegin()->first;
    }

    bool operator==(const SparseVector& o) const { return entries_ == o.entries_; }

private:
    Map entries_;
};

// Throws IncompatibleDomain when v has negative support in a unilateral space.
void check_space_support(const SparseVector& v, const SpaceTag& space);

// Sup norm for c0, (sum |x_i|^p)^(1/p) for lp (overflow-safe scaling).
double norm(const SparseVector& v, const SpaceTag& space);

// alpha*x + beta*y with exact cancellations dropped by the zero threshold.
SparseVector combine(Complex alpha, const SparseVector& x, Complex beta, const SparseVector& y);

struct TruncateResult {
    SparseVector kept;
    double dropped_mass;  // norm of the discarded part in the given space
};

TruncateResult truncate(const SparseVector& v, IndexWindow window, const SpaceTag& space);

// JSON form: {"space": tag, "entries": [[index, re, im], ...]} sorted by
// index. Doubles survive a dump/parse round trip bit-exactly.
json space_to_json(const SpaceTag& space);
SpaceTag space_from_json(const json& j);
json vector_to_json(const SparseVector& v, const SpaceTag& space);
std::pair<SparseVector, SpaceTag> vector_from_json(const json& j);

// FNV-1a digest over the (index, value-bits) stream; used to stamp orbit
// records with the identity of their initial vector.
std::uint64_t vector_digest(const SparseVector& v);

}  // namespace ergolin
