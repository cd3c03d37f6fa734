#include "tscale/time_scale.hpp"

#include <algorithm>
#include <cmath>

#include "tscale/detail/compensated_sum.hpp"
#include "tscale/detail/format.hpp"
#include "tscale/error.hpp"

namespace tscale {

namespace {

std::string num(double v) { return detail::format_real(v); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;


struct IndexBounds {
    std::optional<std::int64_t> first;
    std::optional<std::int64_t> last;

    bool has(std::int64_t n) const {
        return (!first || n >= *first) && (!last || n <= *last);
    }
    std::int64_t clamp(std::int64_t n) const {
        if (first && n < *first) return *first;
        if (last && n > *last) return *last;
        return n;
    }
};

IndexBounds bounds_of(const Segment& seg) {
    return std::visit(
        overloaded{
            [](const DenseInterval&) { return IndexBounds{}; },
            [](const ArithmeticGrid& g) { return IndexBounds{g.first, g.last}; },
            [](const GeometricGrid& g) { return IndexBounds{g.nmin, g.nmax}; },
            [](const SqrtGrid& g) { return IndexBounds{g.nmin, g.nmax}; },
            [](const ExplicitPoints& g) {
                return IndexBounds{std::int64_t{0}, static_cast<std::int64_t>(g.values.size()) - 1};
            },
        },
        seg);
}

double value_of(const Segment& seg, std::int64_t n) {
    return std::visit(
        overloaded{
            [](const DenseInterval&) -> double { return std::nan(""); },
            [n](const ArithmeticGrid& g) { return g.origin + static_cast<double>(n) * g.step; },
            [n](const GeometricGrid& g) { return std::pow(g.q, static_cast<double>(n)); },
            [n](const SqrtGrid&) { return std::sqrt(static_cast<double>(n)); },
            [n](const ExplicitPoints& g) { return g.values[static_cast<std::size_t>(n)]; },
        },
        seg);
}

// Continuous index estimate; exact for grid points up to rounding.
double index_estimate(const Segment& seg, double t) {
    return std::visit(
        overloaded{
            [](const DenseInterval&) -> double { return std::nan(""); },
            [t](const ArithmeticGrid& g) { return (t - g.origin) / g.step; },
            [t](const GeometricGrid& g) {
                return t > 0.0 ? std::log(t) / std::log(g.q) : -kInf;
            },
            [t](const SqrtGrid&) { return t >= 0.0 ? t * t : -kInf; },
            [t](const ExplicitPoints& g) {
                auto it = std::lower_bound(g.values.begin(), g.values.end(), t);
                return static_cast<double>(it - g.values.begin());
            },
        },
        seg);
}

double point_tol(const Segment& seg, double v, double rtol) {
    if (std::holds_alternative<GeometricGrid>(seg)) return rtol * std::abs(v);
    return rtol * std::max(1.0, std::abs(v));
}

std::int64_t clamp_estimate(double est) {
    constexpr double lim = 4.0e18;
    if (!(est > -lim)) return static_cast<std::int64_t>(-lim);
    if (!(est < lim)) return static_cast<std::int64_t>(lim);
    return static_cast<std::int64_t>(std::llround(est));
}

// Nearest grid index to t within the segment's index bounds.
std::int64_t nearest_index(const Segment& seg, double t) {
    const IndexBounds b = bounds_of(seg);
    std::int64_t n = b.clamp(clamp_estimate(index_estimate(seg, t)));
    double best = std::abs(value_of(seg, n) - t);
    for (std::int64_t d : {-1, 1}) {
        const std::int64_t m = n + d;
        if (!b.has(m)) continue;
        const double e = std::abs(value_of(seg, m) - t);
        if (e < best) {
            best = e;
            n = m;
        }
    }
    return n;
}

// Smallest index whose value is >= x (up to tolerance); nullopt if none.
std::optional<std::int64_t> first_index_at_or_after(const Segment& seg, double x, double rtol) {
    const IndexBounds b = bounds_of(seg);
    std::int64_t n = b.clamp(clamp_estimate(std::ceil(index_estimate(seg, x) - 1e-9)));
    while (b.has(n - 1) && value_of(seg, n - 1) >= x - point_tol(seg, x, rtol)) --n;
    while (b.has(n) && value_of(seg, n) < x - point_tol(seg, x, rtol)) ++n;
    if (!b.has(n)) return std::nullopt;
    return n;
}

// Largest index whose value is < x (strictly, beyond tolerance); nullopt if none.
std::optional<std::int64_t> last_index_before(const Segment& seg, double x, double rtol) {
    const IndexBounds b = bounds_of(seg);
    std::int64_t n = b.clamp(clamp_estimate(std::floor(index_estimate(seg, x) + 1e-9)));
    while (b.has(n) && value_of(seg, n) >= x - point_tol(seg, x, rtol)) --n;
    while (b.has(n + 1) && value_of(seg, n + 1) < x - point_tol(seg, x, rtol)) ++n;
    if (!b.has(n)) return std::nullopt;
    return n;
}

void validate_segment(const Segment& seg, std::size_t i) {
    auto bad = [i](const std::string& why) {
        throw Error(Errc::InvalidTimeScale, "segment " + std::to_string(i) + ": " + why);
    };
    std::visit(overloaded{
                   [&](const DenseInterval& d) {
                       if (std::isnan(d.a) || std::isnan(d.b) || !(d.a < d.b))
                           bad("dense interval requires a < b");
                       if (d.a == kInf) bad("dense interval cannot start at +inf");
                   },
                   [&](const ArithmeticGrid& g) {
                       if (!(g.step > 0.0) || !std::isfinite(g.step)) bad("arith step must be > 0");
                       if (!std::isfinite(g.origin)) bad("arith start must be finite");
                       if (g.first && g.last && *g.last < *g.first) bad("arith grid is empty");
                   },
                   [&](const GeometricGrid& g) {
                       if (!(g.q > 1.0) || !std::isfinite(g.q)) bad("geometric base must be > 1");
                       if (g.nmin && g.nmax && *g.nmax < *g.nmin) bad("geometric grid is empty");
                   },
                   [&](const SqrtGrid& g) {
                       if (g.nmin < 0) bad("sqrt grid needs nmin >= 0");
                       if (g.nmax && *g.nmax < g.nmin) bad("sqrt grid is empty");
                   },
                   [&](const ExplicitPoints& g) {
                       if (g.values.empty()) bad("explicit point list is empty");
                       for (std::size_t k = 0; k < g.values.size(); ++k) {
                           if (!std::isfinite(g.values[k])) bad("explicit points must be finite");
                           if (k > 0 && !(g.values[k] > g.values[k - 1]))
                               bad("explicit points must be strictly increasing");
                       }
                   },
               },
               seg);
}

}  // namespace

// ---------------------------------------------------------------------------

void GridPolicy::validate() const {
    if (!(dense_step > 0.0) || !std::isfinite(dense_step))
        throw Error(Errc::InvalidTimeScale, "dense_step must be > 0");
    if (!(membership_rtol > 0.0)) throw Error(Errc::InvalidTimeScale, "membership_rtol must be > 0");
}

double GrainProfile::max_mu() const {
    double m = 0.0;
    for (const auto& [mu, count] : grains)
        if (count > 0) m = std::max(m, mu);
    return m;
}

TimeScale::TimeScale(std::vector<Segment> segments, std::string label, double t_star_lower,
                     double membership_rtol)
    : segments_(std::move(segments)),
      label_(std::move(label)),
      t_star_lower_(t_star_lower),
      rtol_(membership_rtol) {
    if (segments_.empty()) throw Error(Errc::InvalidTimeScale, "no segments");
    if (!(rtol_ > 0.0)) throw Error(Errc::InvalidTimeScale, "membership_rtol must be > 0");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        validate_segment(segments_[i], i);
        if (i == 0) continue;
        const double lo = segment_lower(i);
        if (!std::isfinite(lo))
            throw Error(Errc::InvalidTimeScale,
                        "only the first segment may be unbounded below (segment " +
                            std::to_string(i) + ")");
        const double prev_hi = segment_upper(i - 1);
        if (!(lo > prev_hi))
            throw Error(Errc::InvalidTimeScale, "segments " + std::to_string(i - 1) + " and " +
                                                    std::to_string(i) +
                                                    " overlap or are out of order");
    }
    if (segment_upper(segments_.size() - 1) != kInf)
        throw Error(Errc::InvalidTimeScale, "time scale must be unbounded above");
}

TimeScale TimeScale::reals(double from) {
    return TimeScale({DenseInterval{from, kInf}}, from == -kInf ? "R" : "[" + num(from) + ",inf)");
}

TimeScale TimeScale::integers() {
    return TimeScale({ArithmeticGrid{0.0, 1.0, std::nullopt, std::nullopt}}, "Z");
}

TimeScale TimeScale::h_integers(double h) {
    return TimeScale({ArithmeticGrid{0.0, h, std::nullopt, std::nullopt}}, num(h) + "Z");
}

TimeScale TimeScale::geometric(double q, std::optional<std::int64_t> nmin) {
    return TimeScale({GeometricGrid{q, nmin, std::nullopt}},
                     nmin ? num(q) + "^N" : num(q) + "^Z+{0}");
}

TimeScale TimeScale::sqrt_naturals() { return TimeScale({SqrtGrid{0, std::nullopt}}, "N^(1/2)"); }

double TimeScale::tol_at(double t) const { return rtol_ * std::max(1.0, std::abs(t)); }

double TimeScale::segment_lower(std::size_t i) const {
    const Segment& seg = segments_[i];
    if (const auto* d = std::get_if<DenseInterval>(&seg)) return d->a;
    const IndexBounds b = bounds_of(seg);
    if (b.first) return value_of(seg, *b.first);
    if (std::holds_alternative<GeometricGrid>(seg)) return 0.0;
    return -kInf;
}

double TimeScale::segment_upper(std::size_t i) const {
    const Segment& seg = segments_[i];
    if (const auto* d = std::get_if<DenseInterval>(&seg)) return d->b;
    const IndexBounds b = bounds_of(seg);
    if (b.last) return value_of(seg, *b.last);
    return kInf;
}

double TimeScale::lower() const { return segment_lower(0); }

std::optional<TimeScale::Located> TimeScale::locate(double t) const {
    if (!std::isfinite(t)) return std::nullopt;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& seg = segments_[i];
        if (const auto* d = std::get_if<DenseInterval>(&seg)) {
            const double ta = std::isfinite(d->a) ? tol_at(d->a) : 0.0;
            const double tb = std::isfinite(d->b) ? tol_at(d->b) : 0.0;
            if (t < d->a - ta || t > d->b + tb) continue;
            double v = t;
            if (std::isfinite(d->a) && std::abs(t - d->a) <= ta) v = d->a;
            if (std::isfinite(d->b) && std::abs(t - d->b) <= tb) v = d->b;
            return Located{i, v, std::nullopt, false};
        }
        if (const auto* g = std::get_if<GeometricGrid>(&seg); g && !g->nmin && t == 0.0)
            return Located{i, 0.0, std::nullopt, true};
        if (std::holds_alternative<GeometricGrid>(seg) && t <= 0.0) continue;
        if (std::holds_alternative<SqrtGrid>(seg) && t < 0.0) continue;
        const std::int64_t n = nearest_index(seg, t);
        const double v = value_of(seg, n);
        if (std::abs(v - t) <= point_tol(seg, v, rtol_)) return Located{i, v, n, false};
    }
    return std::nullopt;
}

TimeScale::Located TimeScale::locate_or_throw(double t) const {
    auto l = locate(t);
    if (!l) throw Error(Errc::NotInTimeScale, num(t) + " is not a point of " + label_);
    return *l;
}

std::optional<double> TimeScale::snap(double t) const {
    auto l = locate(t);
    if (!l) return std::nullopt;
    return l->value;
}

double TimeScale::member(double t) const { return locate_or_throw(t).value; }

double TimeScale::sigma(double t) const {
    const Located l = locate_or_throw(t);
    if (l.cluster) throw Error(Errc::ClusterPoint, "sigma is undefined at the cluster point 0");
    const Segment& seg = segments_[l.segment];
    const bool has_next = l.segment + 1 < segments_.size();
    if (const auto* d = std::get_if<DenseInterval>(&seg)) {
        if (l.value < d->b) return l.value;
        return has_next ? segment_lower(l.segment + 1) : l.value;
    }
    const IndexBounds b = bounds_of(seg);
    if (!b.last || *l.index < *b.last) return value_of(seg, *l.index + 1);
    return has_next ? segment_lower(l.segment + 1) : l.value;
}

double TimeScale::rho(double t) const {
    const Located l = locate_or_throw(t);
    if (l.cluster) throw Error(Errc::ClusterPoint, "rho is undefined at the cluster point 0");
    const Segment& seg = segments_[l.segment];
    if (const auto* d = std::get_if<DenseInterval>(&seg)) {
        if (l.value > d->a) return l.value;
        return l.segment > 0 ? segment_upper(l.segment - 1) : l.value;
    }
    const IndexBounds b = bounds_of(seg);
    if (!b.first || *l.index > *b.first) return value_of(seg, *l.index - 1);
    return l.segment > 0 ? segment_upper(l.segment - 1) : l.value;
}

double TimeScale::mu_tilde(double t, double window_start) const {
    const double x = member(t);
    const double w = member(window_start);
    if (w > x)
        throw Error(Errc::EmptyWindow, "window start " + num(w) + " exceeds " + num(x));
    return std::max(grain_profile(w, x).max_mu(), mu(x));
}

void TimeScale::for_each_scattered(double s, double t,
                                   const std::function<void(double, double)>& fn) const {
    const Located ls = locate_or_throw(s);
    const double x = ls.value;
    const double y = member(t);
    if (x >= y) return;
    if (ls.cluster) throw Error(Errc::ClusterPoint, "window starting at the cluster point 0");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const double lo = segment_lower(i);
        const double hi = segment_upper(i);
        if (hi < x || lo >= y) continue;
        const bool has_next = i + 1 < segments_.size();
        const Segment& seg = segments_[i];
        if (std::holds_alternative<DenseInterval>(seg)) {
            if (has_next && hi >= x && hi < y) fn(hi, segment_lower(i + 1) - hi);
            continue;
        }
        auto n0 = first_index_at_or_after(seg, x, rtol_);
        auto n1 = last_index_before(seg, y, rtol_);
        if (!n0 || !n1) continue;
        const IndexBounds b = bounds_of(seg);
        for (std::int64_t n = *n0; n <= *n1; ++n) {
            const double r = value_of(seg, n);
            const double next = (!b.last || n < *b.last) ? value_of(seg, n + 1)
                                                         : (has_next ? segment_lower(i + 1) : r);
            fn(r, next - r);
        }
    }
}

GrainProfile TimeScale::grain_profile(double s, double t) const {
    GrainProfile out;
    const Located ls = locate_or_throw(s);
    const double x = ls.value;
    const double y = member(t);
    if (x >= y) return out;
    if (ls.cluster) throw Error(Errc::ClusterPoint, "window starting at the cluster point 0");
    for (const auto& [lo, hi] : dense_pieces(x, y)) out.dense_length += hi - lo;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& seg = segments_[i];
        const auto* g = std::get_if<ArithmeticGrid>(&seg);
        if (!g) continue;
        auto n0 = first_index_at_or_after(seg, x, rtol_);
        auto n1 = last_index_before(seg, y, rtol_);
        if (!n0 || !n1 || *n1 < *n0) continue;
        std::int64_t interior_last = *n1;
        if (g->last && *n1 == *g->last) {
            interior_last = *n1 - 1;
            const double r = value_of(seg, *n1);
            const bool has_next = i + 1 < segments_.size();
            if (has_next) out.grains.emplace_back(segment_lower(i + 1) - r, 1);
        }
        if (interior_last >= *n0) out.grains.emplace_back(g->step, interior_last - *n0 + 1);
    }
    // Everything that is not an arithmetic grid is enumerated point by point.
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& seg = segments_[i];
        if (std::holds_alternative<ArithmeticGrid>(seg)) continue;
        const double lo = segment_lower(i);
        const double hi = segment_upper(i);
        if (hi < x || lo >= y) continue;
        const bool has_next = i + 1 < segments_.size();
        if (std::holds_alternative<DenseInterval>(seg)) {
            if (has_next && hi >= x && hi < y) out.grains.emplace_back(segment_lower(i + 1) - hi, 1);
            continue;
        }
        auto n0 = first_index_at_or_after(seg, x, rtol_);
        auto n1 = last_index_before(seg, y, rtol_);
        if (!n0 || !n1) continue;
        const IndexBounds b = bounds_of(seg);
        for (std::int64_t n = *n0; n <= *n1; ++n) {
            const double r = value_of(seg, n);
            const double next = (!b.last || n < *b.last) ? value_of(seg, n + 1)
                                                         : (has_next ? segment_lower(i + 1) : r);
            out.grains.emplace_back(next - r, 1);
        }
    }
    std::sort(out.grains.begin(), out.grains.end());
    std::vector<std::pair<double, std::int64_t>> merged;
    for (const auto& g : out.grains) {
        if (!merged.empty() && merged.back().first == g.first)
            merged.back().second += g.second;
        else
            merged.push_back(g);
    }
    out.grains = std::move(merged);
    return out;
}

std::vector<std::pair<double, double>> TimeScale::dense_pieces(double s, double t) const {
    std::vector<std::pair<double, double>> out;
    for (const auto& seg : segments_) {
        const auto* d = std::get_if<DenseInterval>(&seg);
        if (!d) continue;
        const double lo = std::max(d->a, s);
        const double hi = std::min(d->b, t);
        if (lo < hi) out.emplace_back(lo, hi);
    }
    return out;
}

std::optional<std::pair<double, double>> TimeScale::dense_extent(double t) const {
    const Located l = locate_or_throw(t);
    const auto* d = std::get_if<DenseInterval>(&segments_[l.segment]);
    if (!d || !(l.value < d->b)) return std::nullopt;
    return std::make_pair(d->a, d->b);
}

std::optional<std::pair<double, double>> TimeScale::containing_dense(double t) const {
    const Located l = locate_or_throw(t);
    const auto* d = std::get_if<DenseInterval>(&segments_[l.segment]);
    if (!d) return std::nullopt;
    return std::make_pair(d->a, d->b);
}

std::vector<PointSample> TimeScale::iterate_points(double s, double t,
                                                   const GridPolicy& policy) const {
    policy.validate();
    const Located ls = locate_or_throw(s);
    const double x = ls.value;
    const double y = member(t);
    if (x > y) throw Error(Errc::EmptyWindow, "iterate_points with s > t");
    if (ls.cluster && x < y)
        throw Error(Errc::ClusterPoint, "cannot enumerate points starting at the cluster point 0");
    std::vector<PointSample> out;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const double lo_seg = segment_lower(i);
        const double hi_seg = segment_upper(i);
        if (hi_seg < x || lo_seg > y) continue;
        const bool has_next = i + 1 < segments_.size();
        const Segment& seg = segments_[i];
        if (std::holds_alternative<DenseInterval>(seg)) {
            const double lo = std::max(lo_seg, x);
            const double hi = std::min(hi_seg, y);
            auto kind_of = [&](double v) {
                return (has_next && v == hi_seg) ? PointKind::Scattered : PointKind::DenseSample;
            };
            if (lo == hi) {
                out.push_back({lo, kind_of(lo)});
                continue;
            }
            const auto n = static_cast<std::int64_t>(
                std::max(1.0, std::ceil((hi - lo) / policy.dense_step * (1.0 - 1e-12))));
            for (std::int64_t j = 0; j < n; ++j)
                out.push_back({lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n),
                               PointKind::DenseSample});
            out.push_back({hi, kind_of(hi)});
            continue;
        }
        auto n0 = first_index_at_or_after(seg, x, rtol_);
        if (!n0) continue;
        const IndexBounds b = bounds_of(seg);
        for (std::int64_t n = *n0; b.has(n); ++n) {
            const double v = value_of(seg, n);
            if (v > y + point_tol(seg, y, rtol_)) break;
            out.push_back({v, PointKind::Scattered});
        }
    }
    if (!out.empty()) {
        out.front().t = x;
        out.back().t = y;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Delta calculus
// ---------------------------------------------------------------------------

namespace {

struct SimpsonResult {
    double value;
    double abs_value;
};

SimpsonResult simpson(const std::function<double(double)>& f, double a, double b, std::int64_t n) {
    const double h = (b - a) / static_cast<double>(n);
    detail::CompensatedSum s, sa;
    for (std::int64_t j = 0; j <= n; ++j) {
        const double x = (j == n) ? b : a + h * static_cast<double>(j);
        const double w = (j == 0 || j == n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        const double v = f(x);
        s += w * v;
        sa += w * std::abs(v);
    }
    return {s.value() * h / 3.0, sa.value() * h / 3.0};
}

double simpson_richardson(const std::function<double(double)>& f, double a, double b,
                          double step) {
    constexpr double rel_tol = 1e-10;
    constexpr std::int64_t max_panels = std::int64_t{1} << 24;
    auto n = static_cast<std::int64_t>(2.0 * std::ceil((b - a) / (2.0 * step) * (1.0 - 1e-12)));
    n = std::max<std::int64_t>(n, 2);
    SimpsonResult coarse = simpson(f, a, b, n);
    while (2 * n <= max_panels) {
        n *= 2;
        const SimpsonResult fine = simpson(f, a, b, n);
        const double diff = fine.value - coarse.value;
        if (!std::isfinite(fine.value)) break;
        if (std::abs(diff) <= rel_tol * std::max(fine.abs_value, 1e-300))
            return fine.value + diff / 15.0;
        coarse = fine;
    }
    throw Error(Errc::QuadratureFailure, "Simpson refinement stalled on [" + num(a) + ", " +
                                             num(b) + "]");
}

}  // namespace

double delta_integral_split(const TimeScale& ts, const std::function<double(double)>& dense_f,
                            const std::function<double(double, double)>& scattered_term, double s,
                            double t, const GridPolicy& policy,
                            std::span<const double> breakpoints) {
    policy.validate();
    const double x = ts.member(s);
    const double y = ts.member(t);
    if (x > y) throw Error(Errc::EmptyWindow, "delta_integral requires s <= t");
    if (x == y) return 0.0;
    detail::CompensatedSum sum;
    ts.for_each_scattered(x, y, [&](double r, double mu) { sum += scattered_term(r, mu); });
    for (const auto& [lo, hi] : ts.dense_pieces(x, y)) {
        std::vector<double> cuts{lo};
        for (double bp : breakpoints)
            if (bp > lo && bp < hi) cuts.push_back(bp);
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(hi);
        // A right-scattered piece end carries its scattered value; the dense
        // integral needs the left limit there.
        const bool jump_at_end = ts.right_scattered(hi);
        const double hi_left = std::nextafter(hi, lo);
        const std::function<double(double)> left_f = [&](double r) {
            return dense_f(r == hi ? hi_left : r);
        };
        const auto& g = jump_at_end ? left_f : dense_f;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            if (cuts[k] < cuts[k + 1])
                sum += simpson_richardson(g, cuts[k], cuts[k + 1], policy.dense_step);
    }
    return sum.value();
}

double delta_integral(const TimeScale& ts, const std::function<double(double)>& f, double s,
                      double t, const GridPolicy& policy) {
    return delta_integral_split(
        ts, f, [&f](double r, double mu) { return mu * f(r); }, s, t, policy);
}

double delta_derivative(const TimeScale& ts, const std::function<double(double)>& f, double t,
                        const GridPolicy& policy) {
    policy.validate();
    const double x = ts.member(t);
    const double sx = ts.sigma(x);
    if (sx > x) return (f(sx) - f(x)) / (sx - x);
    const auto ext = ts.dense_extent(x);
    if (!ext) throw Error(Errc::NotInTimeScale, "no dense neighbourhood at " + num(x));
    const double h = policy.dense_step;
    const double left = x - ext->first;
    const double right = ext->second - x;
    if (left >= 2.0 * h && right >= 2.0 * h)
        return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
    if (left > 0.0) {
        const double hc = std::min({h, left, right});
        return (f(x + hc) - f(x - hc)) / (2.0 * hc);
    }
    const double hf = std::min(h, right / 2.0);
    return (-3.0 * f(x) + 4.0 * f(x + hf) - f(x + 2.0 * hf)) / (2.0 * hf);
}

}  // namespace tscale
