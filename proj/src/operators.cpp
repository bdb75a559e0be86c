#include "ergolin/operators.hpp"

#include <algorithm>
#include <cmath>

namespace ergolin {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLogOverflow = 690.7755278982137;  // log(1e300)

// Distance from i >= 1 to the arithmetic progression {n >= 1 : n == residue
// (mod modulus)}; d(0) = 0 so that the empty partial product is 1.
std::int64_t residue_dist(std::int64_t i, std::int64_t residue, std::int64_t modulus) {
    if (i <= 0) return 0;
    std::int64_t r = ((i - residue) % modulus + modulus) % modulus;
    std::int64_t up = (modulus - r) % modulus;      // steps to the next element above
    std::int64_t down = r;                          // steps to the previous element
    if (i - down < 1) return up;
    return std::min(up, down);
}

double ipow(double base, std::int64_t e) {
    if (e == 0) return 1.0;
    if (e == 1) return base;
    if (e == -1) return 1.0 / base;
    double acc = 1.0;
    double b = e > 0 ? base : 1.0 / base;
    for (std::int64_t k = std::llabs(e); k > 0; --k) acc *= b;
    return acc;
}

}  // namespace

double WeightSpec::at(std::int64_t index) const {
    double w = 0.0;
    switch (kind) {
        case Kind::Const:
            w = const_value;
            break;
        case Kind::Table: {
            auto it = table.find(index);
            if (it == table.end()) {
                throw IncompatibleDomain("weight table has no entry at index " +
                                         std::to_string(index));
            }
            w = it->second;
            break;
        }
        case Kind::BrDesigned: {
            if (index >= 1) {
                w = positive_value;
            } else {
                // w_{1-i} = rho^{d(i) - d(i-1)}; the exponent step is in
                // {-1, 0, 1}, so powers of two stay exact for rho = 0.5.
                std::int64_t i = 1 - index;
                std::int64_t diff =
                    residue_dist(i, residue, modulus) - residue_dist(i - 1, residue, modulus);
                w = ipow(rho, diff);
            }
            break;
        }
        case Kind::StepProfile: {
            w = step_base;
            // windows are sorted and disjoint; find the last one starting <= index
            auto it = std::upper_bound(step_windows.begin(), step_windows.end(), index,
                                       [](std::int64_t i, const WeightWindow& win) {
                                           return i < win.lo;
                                       });
            if (it != step_windows.begin()) {
                --it;
                if (index <= it->hi) w = it->value;
            }
            break;
        }
    }
    if (w == 0.0 || std::abs(w) > bound) {
        throw Error("weight at index " + std::to_string(index) +
                    " violates the declared bound");
    }
    return w;
}

WeightSpec WeightSpec::constant(double w, double bound) {
    WeightSpec s;
    s.kind = Kind::Const;
    s.const_value = w;
    s.bound = bound;
    return s;
}

WeightSpec WeightSpec::from_table(std::map<std::int64_t, double> t, double bound) {
    WeightSpec s;
    s.kind = Kind::Table;
    s.table = std::move(t);
    s.bound = bound;
    return s;
}

WeightSpec WeightSpec::step_profile(double base, std::vector<WeightWindow> windows,
                                    double bound) {
    if (!(base > 0.0 && base <= bound)) {
        throw ValidationError("step-profile base must lie in (0, bound]");
    }
    for (std::size_t k = 0; k < windows.size(); ++k) {
        const auto& w = windows[k];
        if (w.lo > w.hi) throw ValidationError("step-profile window with lo > hi");
        if (!(w.value > 0.0 && w.value <= bound)) {
            throw ValidationError("step-profile window value must lie in (0, bound]");
        }
        if (k > 0 && windows[k - 1].hi >= w.lo) {
            throw ValidationError("step-profile windows must be sorted and disjoint");
        }
    }
    WeightSpec s;
    s.kind = Kind::StepProfile;
    s.step_base = base;
    s.step_windows = std::move(windows);
    s.bound = bound;
    return s;
}

WeightSpec WeightSpec::br_designed(std::int64_t residue, std::int64_t modulus, double rho,
                                   double positive_value) {
    if (modulus < 1 || residue < 0 || residue >= modulus) {
        throw ValidationError("br-designed weights need 0 <= residue < modulus");
    }
    if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("br-designed rho must lie in (0,1)");
    WeightSpec s;
    s.kind = Kind::BrDesigned;
    s.rho = rho;
    s.residue = residue;
    s.modulus = modulus;
    s.positive_value = positive_value;
    s.bound = std::max({positive_value, 1.0 / rho, rho}) * 2.0;
    return s;
}

OperatorSpec OperatorSpec::backward_shift(WeightSpec w, bool bilateral) {
    OperatorSpec op;
    op.variant = Variant::Shift;
    op.weights = std::move(w);
    op.bilateral = bilateral;
    return op;
}

OperatorSpec OperatorSpec::block_diag(std::vector<double> angles) {
    for (double a : angles) {
        if (!(a >= 0.0 && a < 1.0)) throw ValidationError("block angle outside [0,1)");
    }
    OperatorSpec op;
    op.variant = Variant::BlockDiag;
    op.angles = std::move(angles);
    return op;
}

OperatorSpec OperatorSpec::direct_sum(std::vector<DirectSumPart> parts) {
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    for (const auto& p : parts) {
        if (!p.op) throw ValidationError("direct sum part without an operator");
        if (p.lo >= p.hi) throw ValidationError("direct sum part with empty range");
        ranges.emplace_back(p.lo, p.hi);
    }
    std::sort(ranges.begin(), ranges.end());
    for (std::size_t k = 1; k < ranges.size(); ++k) {
        if (ranges[k].first < ranges[k - 1].second) {
            throw ValidationError("direct sum ranges overlap");
        }
    }
    OperatorSpec op;
    op.variant = Variant::DirectSum;
    op.parts = std::move(parts);
    return op;
}

Complex OperatorSpec::block_phase(std::size_t k) const {
    if (phase_cache_.size() != angles.size()) {
        phase_cache_.resize(angles.size());
        for (std::size_t j = 0; j < angles.size(); ++j) {
            // Quarter turns get exact unit phases so that order-4 rotations
            // compose to the identity bitwise.
            double q = angles[j] * 4.0;
            if (q == std::floor(q)) {
                static const Complex quarter[4] = {
                    {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
                phase_cache_[j] = quarter[static_cast<int>(q) & 3];
                continue;
            }
            double a = 2.0 * 3.141592653589793238462643383279502884 * angles[j];
            phase_cache_[j] = Complex(std::cos(a), std::sin(a));
        }
    }
    return phase_cache_[k];
}

SparseVector apply(const OperatorSpec& op, const SparseVector& v) {
    SparseVector out;
    switch (op.variant) {
        case OperatorSpec::Variant::Shift: {
            for (const auto& [m, c] : v.entries()) {
                if (!op.bilateral) {
                    if (m < 0) throw IncompatibleDomain("unilateral shift given negative index");
                    if (m == 0) continue;  // discarded at the boundary
                }
                out.set(m - 1, op.weights.at(m) * c);
            }
            break;
        }
        case OperatorSpec::Variant::BlockDiag: {
            auto n = static_cast<std::int64_t>(op.angles.size());
            for (const auto& [m, c] : v.entries()) {
                if (m < 0 || m >= n) {
                    throw IncompatibleDomain("index outside the block range");
                }
                out.set(m, op.block_phase(static_cast<std::size_t>(m)) * c);
            }
            break;
        }
        case OperatorSpec::Variant::DirectSum: {
            for (const auto& part : op.parts) {
                SparseVector local;
                for (auto it = v.entries().lower_bound(part.lo);
                     it != v.entries().end() && it->first < part.hi; ++it) {
                    local.set(it->first - part.lo, it->second);
                }
                if (local.empty()) continue;
                SparseVector mapped = apply(*part.op, local);
                for (const auto& [m, c] : mapped.entries()) {
                    if (m < 0 || m + part.lo >= part.hi) continue;  // clipped at range edges
                    out.set(m + part.lo, c);
                }
            }
            // reject entries not covered by any part
            for (const auto& [m, c] : v.entries()) {
                bool covered = false;
                for (const auto& part : op.parts) {
                    if (m >= part.lo && m < part.hi) { covered = true; break; }
                }
                if (!covered) throw IncompatibleDomain("index outside every direct-sum range");
            }
            break;
        }
    }
    return out;
}

namespace {

struct Stream {
    std::vector<std::int64_t> idx;  // original indices, ascending
    std::vector<Complex> val;
};

Stream make_stream(const SparseVector& x0) {
    Stream s;
    s.idx.reserve(x0.support_size());
    s.val.reserve(x0.support_size());
    for (const auto& [m, c] : x0.entries()) {
        s.idx.push_back(m);
        s.val.push_back(c);
    }
    return s;
}

double stream_norm(const Stream& s, std::size_t begin, const SpaceTag& space) {
    if (begin >= s.val.size()) return 0.0;
    if (space.is_c0()) {
        double m = 0.0;
        for (std::size_t k = begin; k < s.val.size(); ++k) m = std::max(m, std::abs(s.val[k]));
        return m;
    }
    double scale = 0.0;
    for (std::size_t k = begin; k < s.val.size(); ++k) scale = std::max(scale, std::abs(s.val[k]));
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t k = begin; k < s.val.size(); ++k) {
        acc += std::pow(std::abs(s.val[k]) / scale, space.p);
    }
    return scale * std::pow(acc, 1.0 / space.p);
}

// Tracked-coordinate cursors: coordinate q at step i is the entry with
// original index q + i; each cursor only ever moves forward.
struct TrackedCursor {
    std::int64_t coord;
    std::size_t pos;
};

constexpr std::size_t kFastPathWork = std::size_t(1) << 26;

VisitRecord orbit_shift(const OperatorSpec& op, const SparseVector& x0, std::int64_t horizon,
                        const SpaceTag& space, std::vector<std::int64_t> tracked_coords) {
    Stream s = make_stream(x0);
    VisitRecord rec;
    rec.horizon = horizon;
    rec.tracked_coords = tracked_coords;
    rec.tracked.assign(tracked_coords.size(), {});
    rec.x0_digest = vector_digest(x0);
    rec.norms.reserve(static_cast<std::size_t>(horizon));
    for (auto& t : rec.tracked) t.reserve(static_cast<std::size_t>(horizon));

    const bool unilateral = !op.bilateral;
    if (unilateral && !s.idx.empty() && s.idx.front() < 0) {
        throw IncompatibleDomain("unilateral shift given negative index");
    }

    std::vector<TrackedCursor> cursors;
    for (std::int64_t q : tracked_coords) cursors.push_back({q, 0});
    auto tracked_value = [&](TrackedCursor& cur, std::int64_t step,
                             auto&& value_at) -> Complex {
        std::int64_t want = cur.coord + step;
        while (cur.pos < s.idx.size() && s.idx[cur.pos] < want) ++cur.pos;
        if (cur.pos < s.idx.size() && s.idx[cur.pos] == want) return value_at(cur.pos, step);
        return Complex(0.0, 0.0);
    };

    const bool fast_ok = op.weights.kind == WeightSpec::Kind::Const && unilateral &&
                         space.is_c0() && op.weights.at(1) > 0.0;
    const std::size_t work = s.idx.size() * static_cast<std::size_t>(horizon);
    if (fast_ok && work > kFastPathWork) {
        const double w = op.weights.const_value;
        const double logw = std::log(w);
        std::vector<double> sufmax(s.idx.size() + 1, -HUGE_VAL);
        for (std::size_t k = s.idx.size(); k-- > 0;) {
            double lv = std::log(std::abs(s.val[k]));
            sufmax[k] = std::max(lv, sufmax[k + 1]);
        }
        std::size_t alive = 0;
        auto value_at = [&](std::size_t pos, std::int64_t step) {
            return s.val[pos] * std::exp(static_cast<double>(step) * logw);
        };
        for (std::int64_t i = 1; i <= horizon; ++i) {
            while (alive < s.idx.size() && s.idx[alive] < i) ++alive;
            double lognorm = alive < s.idx.size()
                                 ? static_cast<double>(i) * logw + sufmax[alive]
                                 : -HUGE_VAL;
            if (lognorm > kLogOverflow) {
                rec.overflow = true;
                rec.overflow_step = i;
                break;
            }
            rec.norms.push_back(lognorm == -HUGE_VAL ? 0.0 : std::exp(lognorm));
            for (std::size_t j = 0; j < cursors.size(); ++j) {
                rec.tracked[j].push_back(tracked_value(cursors[j], i, value_at));
            }
        }
        return rec;
    }

    // Generic streaming: exactly the multiplications an i-fold apply() does.
    std::size_t alive = 0;
    auto value_at = [&](std::size_t pos, std::int64_t) { return s.val[pos]; };
    for (std::int64_t i = 1; i <= horizon; ++i) {
        if (unilateral) {
            while (alive < s.idx.size() && s.idx[alive] < i) ++alive;
        }
        for (std::size_t k = alive; k < s.idx.size(); ++k) {
            s.val[k] *= op.weights.at(s.idx[k] - (i - 1));
        }
        double n = stream_norm(s, alive, space);
        if (n > kNormOverflow) {
            rec.overflow = true;
            rec.overflow_step = i;
            break;
        }
        rec.norms.push_back(n);
        for (std::size_t j = 0; j < cursors.size(); ++j) {
            rec.tracked[j].push_back(tracked_value(cursors[j], i, value_at));
        }
    }
    return rec;
}

VisitRecord orbit_blockdiag(const OperatorSpec& op, const SparseVector& x0, std::int64_t horizon,
                            const SpaceTag& space, std::vector<std::int64_t> tracked_coords) {
    Stream s = make_stream(x0);
    auto n_blocks = static_cast<std::int64_t>(op.angles.size());
    for (std::int64_t m : s.idx) {
        if (m < 0 || m >= n_blocks) throw IncompatibleDomain("index outside the block range");
    }
    VisitRecord rec;
    rec.horizon = horizon;
    rec.tracked_coords = tracked_coords;
    rec.tracked.assign(tracked_coords.size(), {});
    rec.x0_digest = vector_digest(x0);

    std::vector<Complex> phases(s.idx.size());
    for (std::size_t k = 0; k < s.idx.size(); ++k) {
        phases[k] = op.block_phase(static_cast<std::size_t>(s.idx[k]));
    }
    std::vector<std::ptrdiff_t> tracked_pos(tracked_coords.size(), -1);
    for (std::size_t j = 0; j < tracked_coords.size(); ++j) {
        auto it = std::lower_bound(s.idx.begin(), s.idx.end(), tracked_coords[j]);
        if (it != s.idx.end() && *it == tracked_coords[j]) tracked_pos[j] = it - s.idx.begin();
    }
    for (std::int64_t i = 1; i <= horizon; ++i) {
        for (std::size_t k = 0; k < s.val.size(); ++k) s.val[k] *= phases[k];
        rec.norms.push_back(stream_norm(s, 0, space));
        for (std::size_t j = 0; j < tracked_coords.size(); ++j) {
            rec.tracked[j].push_back(tracked_pos[j] >= 0 ? s.val[tracked_pos[j]]
                                                         : Complex(0.0, 0.0));
        }
    }
    return rec;
}

}  // namespace

VisitRecord orbit(const OperatorSpec& op, const SparseVector& x0, std::int64_t horizon,
                  const SpaceTag& space, std::vector<std::int64_t> tracked_coords) {
    if (horizon < 1) throw HorizonTooShort("orbit horizon must be >= 1");
    switch (op.variant) {
        case OperatorSpec::Variant::Shift:
            return orbit_shift(op, x0, horizon, space, std::move(tracked_coords));
        case OperatorSpec::Variant::BlockDiag:
            return orbit_blockdiag(op, x0, horizon, space, std::move(tracked_coords));
        case OperatorSpec::Variant::DirectSum: {
            VisitRecord rec;
            rec.horizon = horizon;
            rec.tracked_coords = tracked_coords;
            rec.tracked.assign(tracked_coords.size(), {});
            rec.x0_digest = vector_digest(x0);
            SparseVector cur = x0;
            for (std::int64_t i = 1; i <= horizon; ++i) {
                cur = apply(op, cur);
                double n = norm(cur, space);
                if (n > kNormOverflow) {
                    rec.overflow = true;
                    rec.overflow_step = i;
                    break;
                }
                rec.norms.push_back(n);
                for (std::size_t j = 0; j < tracked_coords.size(); ++j) {
                    rec.tracked[j].push_back(cur.at(tracked_coords[j]));
                }
            }
            return rec;
        }
    }
    throw Error("unreachable operator variant");
}

EigenField eigenvector_field(const OperatorSpec& op, Complex lambda, std::int64_t trunc) {
    if (op.variant != OperatorSpec::Variant::Shift) {
        throw Error("eigenvector field is defined for shifts");
    }
    constexpr std::int64_t kCap = 10000;
    constexpr double kTailTol = 1e-12;

    // Positive side magnitudes 1/(|w_1|...|w_n|).
    std::int64_t cap = trunc >= 0 ? trunc : kCap;
    std::vector<double> mag(static_cast<std::size_t>(cap) + 1);
    mag[0] = 1.0;
    for (std::int64_t n = 1; n <= cap; ++n) {
        mag[static_cast<std::size_t>(n)] =
            mag[static_cast<std::size_t>(n - 1)] / std::abs(op.weights.at(n));
    }
    std::int64_t M = trunc;
    double tail = 0.0;
    if (trunc < 0) {
        std::vector<double> suffix(mag.size() + 1, 0.0);
        for (std::size_t k = mag.size(); k-- > 0;) suffix[k] = suffix[k + 1] + mag[k];
        // m == cap would compare against the empty tail, which is vacuously
        // zero; stop one short so non-decaying coefficients are detected.
        for (std::int64_t m = 0; m < cap; ++m) {
            if (suffix[static_cast<std::size_t>(m) + 1] < kTailTol) {
                M = m;
                tail = suffix[static_cast<std::size_t>(m) + 1];
                break;
            }
        }
        if (M < 0) throw DivergentField("weight products grow too slowly for a c0 field");
    }

    SparseVector E;
    Complex coef(1.0, 0.0);
    E.set(0, coef);
    for (std::int64_t n = 1; n <= M; ++n) {
        coef *= lambda / op.weights.at(n);
        E.set(n, coef);
    }
    if (op.bilateral) {
        // Negative side: E_n = w_{n+1} E_{n+1} / lambda. Must decay too.
        Complex c = Complex(1.0, 0.0);
        bool decayed = false;
        for (std::int64_t n = -1; n >= -kCap; --n) {
            c *= op.weights.at(n + 1) / lambda;
            double a = std::abs(c);
            if (a < kTailTol) { decayed = true; break; }
            if (a > 1e12) break;
            E.set(n, c);
        }
        if (!decayed) throw DivergentField("negative-side coefficients do not decay");
    }

    EigenField out;
    out.vector = std::move(E);
    out.trunc = M;
    out.tail_bound = trunc < 0 ? tail : 0.0;
    SparseVector diff = combine(Complex(1.0, 0.0), apply(op, out.vector), -lambda, out.vector);
    out.residual = norm(diff, SpaceTag::c0(op.bilateral));
    return out;
}

std::vector<PeriodicPoint> periodic_points(const OperatorSpec& op, std::int64_t N,
                                           std::int64_t trunc) {
    if (N < 1) throw ValidationError("period must be >= 1");
    std::vector<PeriodicPoint> out;
    auto measured_residual = [&](const SparseVector& v) {
        SparseVector cur = v;
        for (std::int64_t i = 0; i < N; ++i) cur = apply(op, cur);
        return norm(combine(Complex(1, 0), cur, Complex(-1, 0), v), SpaceTag::c0(true));
    };
    switch (op.variant) {
        case OperatorSpec::Variant::BlockDiag: {
            for (std::size_t k = 0; k < op.angles.size(); ++k) {
                double t = op.angles[k] * static_cast<double>(N);
                if (std::abs(t - std::round(t)) <= 1e-9) {
                    SparseVector v = SparseVector::unit(static_cast<std::int64_t>(k));
                    out.push_back({v, measured_residual(v), op.angles[k]});
                }
            }
            break;
        }
        case OperatorSpec::Variant::Shift: {
            for (std::int64_t k = 0; k < N; ++k) {
                double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(N);
                Complex lambda(std::cos(a), std::sin(a));
                EigenField f;
                try {
                    f = eigenvector_field(op, lambda, trunc);
                } catch (const DivergentField&) {
                    return {};  // divergence is lambda-independent on the circle
                }
                out.push_back({f.vector, measured_residual(f.vector),
                               static_cast<double>(k) / static_cast<double>(N)});
            }
            break;
        }
        case OperatorSpec::Variant::DirectSum: {
            for (const auto& part : op.parts) {
                auto pts = periodic_points(*part.op, N, trunc);
                for (auto& p : pts) {
                    SparseVector shifted;
                    for (const auto& [m, c] : p.vector.entries()) {
                        if (m + part.lo >= part.hi) continue;  // clip to the range
                        shifted.set(m + part.lo, c);
                    }
                    out.push_back({shifted, measured_residual(shifted), p.angle});
                }
            }
            break;
        }
    }
    return out;
}

json operator_to_json(const OperatorSpec& op) {
    json j;
    switch (op.variant) {
        case OperatorSpec::Variant::Shift: {
            j["variant"] = "shift";
            j["bilateral"] = op.bilateral;
            json w;
            switch (op.weights.kind) {
                case WeightSpec::Kind::Const:
                    w["kind"] = "const";
                    w["value"] = op.weights.const_value;
                    break;
                case WeightSpec::Kind::Table: {
                    w["kind"] = "table";
                    json entries = json::array();
                    for (const auto& [i, x] : op.weights.table) {
                        entries.push_back(json::array({i, x}));
                    }
                    w["entries"] = std::move(entries);
                    break;
                }
                case WeightSpec::Kind::BrDesigned:
                    w["kind"] = "br-designed";
                    w["rho"] = op.weights.rho;
                    w["residue"] = op.weights.residue;
                    w["modulus"] = op.weights.modulus;
                    w["positive"] = op.weights.positive_value;
                    break;
                case WeightSpec::Kind::StepProfile: {
                    w["kind"] = "step-profile";
                    w["base"] = op.weights.step_base;
                    json windows = json::array();
                    for (const auto& win : op.weights.step_windows) {
                        windows.push_back(json::array({win.lo, win.hi, win.value}));
                    }
                    w["windows"] = std::move(windows);
                    break;
                }
            }
            w["bound"] = op.weights.bound;
            j["weights"] = std::move(w);
            break;
        }
        case OperatorSpec::Variant::BlockDiag:
            j["variant"] = "blockdiag";
            j["angles"] = op.angles;
            break;
        case OperatorSpec::Variant::DirectSum: {
            j["variant"] = "direct-sum";
            json parts = json::array();
            for (const auto& p : op.parts) {
                parts.push_back({{"lo", p.lo}, {"hi", p.hi}, {"op", operator_to_json(*p.op)}});
            }
            j["parts"] = std::move(parts);
            break;
        }
    }
    return j;
}

OperatorSpec operator_from_json(const json& j) {
    std::string variant = j.at("variant").get<std::string>();
    if (variant == "shift") {
        const json& w = j.at("weights");
        std::string kind = w.at("kind").get<std::string>();
        WeightSpec ws;
        if (kind == "const") {
            ws = WeightSpec::constant(w.at("value").get<double>(), w.at("bound").get<double>());
        } else if (kind == "table") {
            std::map<std::int64_t, double> t;
            for (const auto& e : w.at("entries")) {
                t[e[0].get<std::int64_t>()] = e[1].get<double>();
            }
            ws = WeightSpec::from_table(std::move(t), w.at("bound").get<double>());
        } else if (kind == "br-designed") {
            ws = WeightSpec::br_designed(w.at("residue").get<std::int64_t>(),
                                         w.at("modulus").get<std::int64_t>(),
                                         w.at("rho").get<double>(),
                                         w.at("positive").get<double>());
            ws.bound = w.at("bound").get<double>();
        } else if (kind == "step-profile") {
            std::vector<WeightWindow> windows;
            for (const auto& e : w.at("windows")) {
                windows.push_back({e[0].get<std::int64_t>(), e[1].get<std::int64_t>(),
                                   e[2].get<double>()});
            }
            ws = WeightSpec::step_profile(w.at("base").get<double>(), std::move(windows),
                                          w.at("bound").get<double>());
        } else {
            throw ValidationError("unknown weight kind: " + kind);
        }
        return OperatorSpec::backward_shift(std::move(ws), j.at("bilateral").get<bool>());
    }
    if (variant == "blockdiag") {
        return OperatorSpec::block_diag(j.at("angles").get<std::vector<double>>());
    }
    if (variant == "direct-sum") {
        std::vector<DirectSumPart> parts;
        for (const auto& p : j.at("parts")) {
            parts.push_back({p.at("lo").get<std::int64_t>(), p.at("hi").get<std::int64_t>(),
                             std::make_shared<OperatorSpec>(operator_from_json(p.at("op")))});
        }
        return OperatorSpec::direct_sum(std::move(parts));
    }
    throw ValidationError("unknown operator variant: " + variant);
}

}  // namespace ergolin
