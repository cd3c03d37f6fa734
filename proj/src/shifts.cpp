#include "tscale/shifts.hpp"

#include <algorithm>
#include <cmath>

#include "tscale/detail/format.hpp"
#include "tscale/detail/rng.hpp"
#include "tscale/error.hpp"

namespace tscale {

namespace {

std::string num(double v) { return detail::format_real(v); }

constexpr double kAxiomRtol = 1e-10;
constexpr double kAbsFloor = 1e-14;

double rel_gap(double a, double b) {
    return std::abs(a - b) / (std::max(std::abs(a), std::abs(b)) + kAbsFloor / kAxiomRtol);
}

bool same(double a, double b) { return std::abs(a - b) <= kAxiomRtol * std::max(std::abs(a), std::abs(b)) + kAbsFloor; }

bool compatible(ShiftFamily family, const TimeScale& ts) {
    for (const Segment& seg : ts.segments()) {
        const bool dense = std::holds_alternative<DenseInterval>(seg);
        switch (family) {
            case ShiftFamily::Translation:
                if (!dense && !std::holds_alternative<ArithmeticGrid>(seg) &&
                    !std::holds_alternative<ExplicitPoints>(seg))
                    return false;
                break;
            case ShiftFamily::Scaling:
                if (!dense && !std::holds_alternative<GeometricGrid>(seg)) return false;
                break;
            case ShiftFamily::SqrtPythagorean:
                if (std::holds_alternative<SqrtGrid>(seg)) break;
                if (!dense || std::get<DenseInterval>(seg).a < 0.0) return false;
                break;
            case ShiftFamily::Custom:
                break;
        }
    }
    return true;
}

}  // namespace

std::string_view to_string(ShiftFamily f) noexcept {
    switch (f) {
        case ShiftFamily::Translation: return "translation";
        case ShiftFamily::Scaling: return "scaling";
        case ShiftFamily::SqrtPythagorean: return "sqrt";
        case ShiftFamily::Custom: return "custom";
    }
    return "unknown";
}

bool ShiftSystem::in_t_star(double t) const {
    const auto x = ts.snap(t);
    if (!x) return false;
    if (*x < t_star_lower) return false;
    if (exclude_zero && *x == 0.0) return false;
    return true;
}

std::optional<double> ShiftSystem::try_minus(double s, double t) const {
    const auto ss = ts.snap(s);
    if (!ss || *ss < t0 || !in_t_star(t)) return std::nullopt;
    const double v = minus(*ss, *ts.snap(t));
    if (!std::isfinite(v) || !in_t_star(v)) return std::nullopt;
    return ts.snap(v);
}

std::optional<double> ShiftSystem::try_plus(double s, double t) const {
    const auto ss = ts.snap(s);
    if (!ss || *ss < t0 || !in_t_star(t)) return std::nullopt;
    const double v = plus(*ss, *ts.snap(t));
    if (!std::isfinite(v) || !in_t_star(v)) return std::nullopt;
    return ts.snap(v);
}

double ShiftSystem::delta_minus(double s, double t) const {
    if (auto v = try_minus(s, t)) return *v;
    throw Error(Errc::OutOfDomain, "(" + num(s) + ", " + num(t) + ") is outside the domain of delta_-");
}

double ShiftSystem::delta_plus(double s, double t) const {
    if (auto v = try_plus(s, t)) return *v;
    throw Error(Errc::OutOfDomain, "(" + num(s) + ", " + num(t) + ") is outside the domain of delta_+");
}

ShiftSystem builtin_shift(ShiftFamily family, const TimeScale& ts, std::optional<double> t0) {
    if (family == ShiftFamily::Custom)
        throw Error(Errc::IncompatibleFamily, "custom shifts need explicit maps");
    if (!compatible(family, ts))
        throw Error(Errc::IncompatibleFamily,
                    std::string(to_string(family)) + " shifts do not act on " + ts.label());
    ShiftSystem out{ts, 0.0, {}, {}, family};
    switch (family) {
        case ShiftFamily::Translation: {
            const double a = t0.value_or(0.0);
            out.t0 = a;
            out.minus = [a](double s, double t) { return t - s + a; };
            out.plus = [a](double s, double t) { return t + s - a; };
            break;
        }
        case ShiftFamily::Scaling: {
            const double a = t0.value_or(1.0);
            if (!(a > 0.0)) throw Error(Errc::IncompatibleFamily, "scaling shifts need t0 > 0");
            out.t0 = a;
            out.exclude_zero = true;
            out.minus = [a](double s, double t) { return t >= 0.0 ? t * a / s : t * s / a; };
            out.plus = [a](double s, double t) { return t >= 0.0 ? t * s / a : t * a / s; };
            break;
        }
        case ShiftFamily::SqrtPythagorean: {
            const double a = t0.value_or(0.0);
            if (a < 0.0) throw Error(Errc::IncompatibleFamily, "sqrt shifts need t0 >= 0");
            out.t0 = a;
            out.t_star_lower = 0.0;
            out.minus = [a](double s, double t) { return std::sqrt(t * t - s * s + a * a); };
            out.plus = [a](double s, double t) { return std::sqrt(t * t + s * s - a * a); };
            break;
        }
        case ShiftFamily::Custom:
            break;
    }
    if (!out.in_t_star(out.t0))
        throw Error(Errc::IncompatibleFamily, "initial point " + num(out.t0) + " is not in T*");
    out.t0 = *ts.snap(out.t0);
    return out;
}

ShiftSystem custom_shift(const TimeScale& ts, double t0, ShiftMap minus, ShiftMap plus,
                         double t_star_lower, bool exclude_zero) {
    if (!minus || !plus)
        throw Error(Errc::InvalidDelaySpec, "custom shifts must supply both delta_- and delta_+");
    ShiftSystem out{ts, t0, std::move(minus), std::move(plus), ShiftFamily::Custom, t_star_lower,
                    exclude_zero};
    if (!out.in_t_star(t0))
        throw Error(Errc::InvalidDelaySpec, "initial point " + num(t0) + " is not in T*");
    out.t0 = *ts.snap(t0);
    return out;
}

// ---------------------------------------------------------------------------

DelaySpec::DelaySpec(ShiftSystem shift, std::vector<double> delays)
    : shift_(std::move(shift)) {
    const TimeScale& ts = shift_.ts;
    if (delays.empty() || !ts.snap(delays.front()) || *ts.snap(delays.front()) != shift_.t0)
        delays.insert(delays.begin(), shift_.t0);
    delays_.reserve(delays.size());
    for (std::size_t i = 0; i < delays.size(); ++i) {
        const auto h = ts.snap(delays[i]);
        if (!h)
            throw Error(Errc::InvalidDelaySpec, "delay " + num(delays[i]) + " is not a point of " + ts.label());
        if (i > 0 && !(*h > delays_.back()))
            throw Error(Errc::InvalidDelaySpec, "delays must be strictly increasing and exceed t0");
        delays_.push_back(*h);
    }
    window_start_ = shift_.try_minus(delays_.back(), shift_.t0);
}

double DelaySpec::window_start() const {
    if (!window_start_)
        throw Error(Errc::InvalidDelaySpec,
                    "delta_-(" + num(delays_.back()) + ", t0) is outside the shift domain");
    return *window_start_;
}

double DelaySpec::apply(std::size_t i, double t) const {
    if (i > r()) throw Error(Errc::OutOfDomain, "delay index " + std::to_string(i) + " exceeds r");
    const auto x = ts().snap(t);
    if (!x || *x < t0())
        throw Error(Errc::OutOfDomain, num(t) + " is not in [t0, inf) of " + ts().label());
    if (i == 0) return *x;
    return shift_.delta_minus(delays_[i], *x);
}

double delay_apply(const DelaySpec& spec, std::size_t i, double t) { return spec.apply(i, t); }

// ---------------------------------------------------------------------------
// Sampling validators
// ---------------------------------------------------------------------------

namespace {

constexpr int kWalkSteps = 30;
constexpr double kDenseReach = 10.0;

double walk_forward(const TimeScale& ts, double x) {
    for (int i = 0; i < kWalkSteps; ++i) {
        if (ts.right_scattered(x)) {
            x = ts.sigma(x);
        } else {
            const auto e = ts.dense_extent(x);
            x = std::min(x + kDenseReach / kWalkSteps, e->second);
        }
    }
    return x;
}

double walk_backward(const ShiftSystem& sh, double x) {
    const TimeScale& ts = sh.ts;
    for (int i = 0; i < kWalkSteps; ++i) {
        double nx = x;
        if (ts.left_scattered(x)) {
            nx = ts.rho(x);
        } else if (const auto d = ts.containing_dense(x)) {
            nx = std::max(x - kDenseReach / kWalkSteps, d->first);
        }
        if (nx == x || nx < sh.t_star_lower) break;
        x = nx;
    }
    return x;
}

// Scattered points and deterministic dense samples of [a, b], plus random dense draws.
std::vector<double> sample_pool(const TimeScale& ts, double a, double b, int dense_draws,
                                detail::Rng& rng) {
    std::vector<double> pool;
    if (a == b) return {a};
    GridPolicy pol;
    pol.dense_step = (b - a) / 200.0;
    for (const auto& p : ts.iterate_points(a, b, pol)) pool.push_back(p.t);
    const auto pieces = ts.dense_pieces(a, b);
    if (!pieces.empty()) {
        for (int k = 0; k < dense_draws; ++k) {
            const auto& [lo, hi] = pieces[rng.index(pieces.size())];
            pool.push_back(rng.uniform(lo, hi));
        }
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

struct Tally {
    CheckResult& res;
    void ok(double gap = 0.0) {
        ++res.evaluated;
        res.worst = std::max(res.worst, gap);
    }
    void bad(double gap, const std::string& w) {
        ++res.evaluated;
        res.worst = std::max(res.worst, gap);
        res.fail(w);
    }
    void expect_eq(double got, double want, const std::string& w) {
        const double g = rel_gap(got, want);
        if (same(got, want))
            ok(g);
        else
            bad(g, w + ": got " + num(got) + ", expected " + num(want));
    }
};

std::string pt(std::initializer_list<std::pair<const char*, double>> vals) {
    std::string s;
    for (const auto& [k, v] : vals) {
        if (!s.empty()) s += ", ";
        s += std::string(k) + "=" + num(v);
    }
    return s;
}

}  // namespace

CheckReport validate_shift_axioms(const ShiftSystem& sh, int samples, unsigned long long seed) {
    if (samples <= 0) throw Error(Errc::PreconditionViolated, "samples must be positive");
    CheckReport rep;
    rep.seed = seed;
    detail::Rng rng(seed);
    const TimeScale& ts = sh.ts;
    const double t0 = sh.t0;
    const double hi = walk_forward(ts, t0);
    const double lo = walk_backward(sh, t0);
    const auto pool = sample_pool(ts, lo, hi, 200, rng);
    std::vector<double> S, T;
    for (double v : pool) {
        if (sh.in_t_star(v)) T.push_back(v);
        if (v >= t0) S.push_back(v);
    }
    if (S.empty() || T.empty())
        throw Error(Errc::PreconditionViolated, "no admissible sample points near t0");
    auto drawS = [&] { return S[rng.index(S.size())]; };
    auto drawT = [&] { return T[rng.index(T.size())]; };

    for (const char* name : {"P.1", "P.2", "P.3", "P.4", "P.5", "(i)", "(ii)", "(iii)", "(iv)",
                             "(v)", "(vi)", "(vii)", "(viii)", "(ix)", "(x)"})
        rep.add(name);
    auto T_ = [&](std::size_t k) { return Tally{rep.checks[k]}; };

    for (int n = 0; n < samples; ++n) {
        const double s = drawS();
        const double u = drawS();
        double t = drawT();
        double v = drawT();

        // P.1: strict increase in the second argument, for T0 <= t < u.
        {
            auto tl = T_(0);
            double a = std::min(t, v), b = std::max(t, v);
            if (a >= s && a < b) {
                for (int sign = 0; sign < 2; ++sign) {
                    const auto fa = sign ? sh.try_plus(s, a) : sh.try_minus(s, a);
                    const auto fb = sign ? sh.try_plus(s, b) : sh.try_minus(s, b);
                    if (!fa || !fb) continue;
                    if (*fa < *fb)
                        tl.ok();
                    else
                        tl.bad(0.0, std::string(sign ? "delta_+" : "delta_-") + " not increasing at " +
                                        pt({{"s", s}, {"t", a}, {"u", b}}));
                }
            }
        }
        // P.2: larger shift moves further.
        {
            auto tl = T_(1);
            const double T1 = std::min(s, u), T2 = std::max(s, u);
            if (T1 < T2) {
                const auto m1 = sh.try_minus(T1, t), m2 = sh.try_minus(T2, t);
                if (m1 && m2) {
                    if (*m1 > *m2)
                        tl.ok();
                    else
                        tl.bad(0.0, "delta_- " + pt({{"T1", T1}, {"T2", T2}, {"u", t}}));
                }
                const auto p1 = sh.try_plus(T1, t), p2 = sh.try_plus(T2, t);
                if (p1 && p2) {
                    if (*p1 < *p2)
                        tl.ok();
                    else
                        tl.bad(0.0, "delta_+ " + pt({{"T1", T1}, {"T2", T2}, {"u", t}}));
                }
            }
        }
        // P.3: t0 is neutral on both sides of delta_+.
        {
            auto tl = T_(2);
            if (const auto a = sh.try_plus(s, t0))
                tl.expect_eq(*a, s, "delta_+(t, t0) at " + pt({{"t", s}}));
            else
                tl.bad(1.0, "(t, t0) outside D_+ at " + pt({{"t", s}}));
            if (const auto b = sh.try_plus(t0, t))
                tl.expect_eq(*b, t, "delta_+(t0, t) at " + pt({{"t", t}}));
            else
                tl.bad(1.0, "(t0, t) outside D_+ at " + pt({{"t", t}}));
        }
        // P.4: delta_-/+ invert each other.
        {
            auto tl = T_(3);
            if (const auto m = sh.try_minus(s, t)) {
                if (const auto back = sh.try_plus(s, *m))
                    tl.expect_eq(*back, t, "delta_+(s, delta_-(s,t)) at " + pt({{"s", s}, {"t", t}}));
                else
                    tl.bad(1.0, "(s, delta_-(s,t)) outside D_+ at " + pt({{"s", s}, {"t", t}}));
            }
            if (const auto p = sh.try_plus(s, t)) {
                if (const auto back = sh.try_minus(s, *p))
                    tl.expect_eq(*back, t, "delta_-(s, delta_+(s,t)) at " + pt({{"s", s}, {"t", t}}));
                else
                    tl.bad(1.0, "(s, delta_+(s,t)) outside D_- at " + pt({{"s", s}, {"t", t}}));
            }
        }
        // P.5: shifts of different sizes commute. The conclusion is checked
        // where delta_-/+(u, t) exists.
        {
            auto tl = T_(4);
            for (int sign = 0; sign < 2; ++sign) {
                const auto inner = sign ? sh.try_plus(s, t) : sh.try_minus(s, t);
                if (!inner) continue;
                const auto lhs = sign ? sh.try_minus(u, *inner) : sh.try_plus(u, *inner);
                if (!lhs) continue;
                const auto ut = sign ? sh.try_minus(u, t) : sh.try_plus(u, t);
                if (!ut) continue;
                const auto rhs = sign ? sh.try_plus(s, *ut) : sh.try_minus(s, *ut);
                const std::string w = pt({{"s", s}, {"u", u}, {"t", t}});
                if (!rhs)
                    tl.bad(1.0, "(s, delta(u,t)) outside the domain at " + w);
                else
                    tl.expect_eq(*lhs, *rhs, "commutation at " + w);
            }
        }
        // (i) delta_-(t, t) = t0
        {
            auto tl = T_(5);
            if (const auto a = sh.try_minus(s, s))
                tl.expect_eq(*a, t0, "delta_-(t,t) at " + pt({{"t", s}}));
            else
                tl.bad(1.0, "(t, t) outside D_- at " + pt({{"t", s}}));
        }
        // (ii) delta_-(t0, t) = t
        {
            auto tl = T_(6);
            if (const auto a = sh.try_minus(t0, t))
                tl.expect_eq(*a, t, "delta_-(t0,t) at " + pt({{"t", t}}));
            else
                tl.bad(1.0, "(t0, t) outside D_- at " + pt({{"t", t}}));
        }
        // (iii) delta_+(s,t) = w  <=>  delta_-(s,w) = t
        {
            auto tl = T_(7);
            if (const auto w = sh.try_plus(s, t)) {
                if (const auto back = sh.try_minus(s, *w))
                    tl.expect_eq(*back, t, "forward direction at " + pt({{"s", s}, {"t", t}}));
                else
                    tl.bad(1.0, "(s, w) outside D_- at " + pt({{"s", s}, {"t", t}}));
            }
            if (const auto w = sh.try_minus(s, v)) {
                if (const auto back = sh.try_plus(s, *w))
                    tl.expect_eq(*back, v, "converse at " + pt({{"s", s}, {"u", v}}));
                else
                    tl.bad(1.0, "(s, t) outside D_+ at " + pt({{"s", s}, {"u", v}}));
            }
        }
        // (iv) delta_+(t, delta_-(s, t0)) = delta_-(s, t) for t >= t0
        {
            auto tl = T_(8);
            const double tt = u;
            const auto base = sh.try_minus(s, t0);
            const auto rhs = sh.try_minus(s, tt);
            if (base && rhs && sh.try_plus(s, tt)) {
                if (const auto lhs = sh.try_plus(tt, *base))
                    tl.expect_eq(*lhs, *rhs, "at " + pt({{"s", s}, {"t", tt}}));
                else
                    tl.bad(1.0, "(t, delta_-(s,t0)) outside D_+ at " + pt({{"s", s}, {"t", tt}}));
            }
        }
        // (v) delta_+ is symmetric on [t0, inf)^2
        {
            auto tl = T_(9);
            const auto a = sh.try_plus(u, s);
            const auto b = sh.try_plus(s, u);
            if (a && b)
                tl.expect_eq(*a, *b, "at " + pt({{"u", u}, {"t", s}}));
            else if (a || b)
                tl.bad(1.0, "one-sided domain at " + pt({{"u", u}, {"t", s}}));
        }
        // (vi) delta_+(s, t) >= t0 for t >= t0
        {
            auto tl = T_(10);
            if (const auto a = sh.try_plus(s, u)) {
                if (*a >= t0)
                    tl.ok();
                else
                    tl.bad(0.0, "delta_+ below t0 at " + pt({{"s", s}, {"t", u}}));
            }
        }
        // (vii) delta_-(s, t) >= t0 for t >= s
        {
            auto tl = T_(11);
            const double a = std::min(s, u), b = std::max(s, u);
            if (const auto m = sh.try_minus(a, b)) {
                if (*m >= t0 - kAbsFloor)
                    tl.ok();
                else
                    tl.bad(0.0, "delta_- below t0 at " + pt({{"s", a}, {"t", b}}));
            }
        }
        // (viii) delta_+(s, .) has a positive delta derivative
        {
            auto tl = T_(12);
            if (sh.try_plus(s, t)) {
                double d = 0.0;
                const double st = ts.sigma(t);
                if (st > t) {
                    if (sh.try_plus(s, st)) d = (sh.plus(s, st) - sh.plus(s, t)) / (st - t);
                    else d = 1.0;
                } else {
                    d = delta_derivative(ts, [&](double x) { return sh.plus(s, x); }, t);
                }
                if (d > 0.0)
                    tl.ok();
                else
                    tl.bad(0.0, "non-positive derivative " + num(d) + " at " + pt({{"s", s}, {"t", t}}));
            }
        }
        // (ix) delta_+(delta_-(u,s), delta_-(s,v)) = delta_-(u,v) for u <= s <= v
        {
            auto tl = T_(13);
            double a = u, b = s, c = std::max({u, s, v});
            if (a > b) std::swap(a, b);
            const auto us = sh.try_minus(a, b);
            const auto sv = sh.try_minus(b, c);
            const auto uv = sh.try_minus(a, c);
            if (us && sv && uv) {
                if (const auto lhs = sh.try_plus(*us, *sv))
                    tl.expect_eq(*lhs, *uv, "at " + pt({{"u", a}, {"s", b}, {"v", c}}));
                else
                    tl.bad(1.0, "outer delta_+ outside D_+ at " + pt({{"u", a}, {"s", b}, {"v", c}}));
            }
        }
        // (x) delta_-(s, t) = t0 only when s = t
        {
            auto tl = T_(14);
            if (const auto m = sh.try_minus(s, t)) {
                if (same(*m, t0) != same(s, t))
                    tl.bad(0.0, "delta_-(s,t)=" + num(*m) + " at " + pt({{"s", s}, {"t", t}}));
                else
                    tl.ok();
            }
        }
    }
    return rep;
}

std::pair<double, double> default_delay_window(const ShiftSystem& shift) {
    return {shift.t0, walk_forward(shift.ts, shift.t0)};
}

CheckReport validate_delay_function(const DelaySpec& spec, std::pair<double, double> window,
                                    int samples, unsigned long long seed) {
    if (samples <= 0) throw Error(Errc::PreconditionViolated, "samples must be positive");
    const ShiftSystem& sh = spec.shift();
    const TimeScale& ts = sh.ts;
    const double a = ts.member(window.first);
    const double b = ts.member(window.second);
    if (a < spec.t0() || b < a)
        throw Error(Errc::PreconditionViolated, "window must lie in [t0, inf) with a <= b");
    CheckReport rep;
    rep.seed = seed;
    detail::Rng rng(seed);
    auto pool = sample_pool(ts, a, b, samples / 4, rng);
    if (pool.size() > static_cast<std::size_t>(samples)) {
        std::vector<double> thin;
        const double stride = static_cast<double>(pool.size() - 1) / (samples - 1);
        for (int k = 0; k < samples; ++k)
            thin.push_back(pool[static_cast<std::size_t>(std::llround(k * stride))]);
        thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
        pool = std::move(thin);
    }

    for (std::size_t i = 1; i <= spec.r(); ++i) {
        const double h = spec.delays()[i];
        const std::string tag = "[h=" + num(h) + "]";
        rep.add("domain" + tag);
        rep.add("onto" + tag);
        rep.add("structure" + tag);
        rep.add("sigma_commute" + tag);
        rep.add("monotone" + tag);
        const std::size_t base = rep.checks.size() - 5;
        Tally dom{rep.checks[base]}, onto{rep.checks[base + 1]}, str{rep.checks[base + 2]},
            sig{rep.checks[base + 3]}, mono{rep.checks[base + 4]};

        std::vector<std::pair<double, double>> images;
        for (double t : pool) {
            const auto m = sh.try_minus(h, t);
            if (!m) {
                dom.bad(1.0, "delta_-(h, t) not in T* at t=" + num(t));
                continue;
            }
            dom.ok();
            images.emplace_back(t, *m);
            // (a) round trip
            if (const auto back = sh.try_plus(h, *m))
                onto.expect_eq(*back, t, "delta_+(h, delta_-(h,t)) at t=" + num(t));
            else
                onto.bad(1.0, "delta_+(h, .) undefined at delta_-(h,t) for t=" + num(t));
            // (b) structure preservation
            const bool rs_t = ts.right_scattered(t);
            const bool rs_m = ts.right_scattered(*m);
            if (rs_t == rs_m)
                str.ok();
            else
                str.bad(1.0, "t=" + num(t) + " is right-" + (rs_t ? "scattered" : "dense") +
                                 " but delta_-(h,t)=" + num(*m) + " is right-" +
                                 (rs_m ? "scattered" : "dense"));
            // (c) sigma commutation
            if (rs_t) {
                if (const auto ms = sh.try_minus(h, ts.sigma(t)))
                    sig.expect_eq(*ms, ts.sigma(*m), "delta_-(h, sigma(t)) vs sigma(delta_-(h,t)) at t=" + num(t));
                else
                    sig.bad(1.0, "delta_-(h, sigma(t)) undefined at t=" + num(t));
            }
            // (d) delay is strictly behind
            if (*m < t)
                mono.ok();
            else
                mono.bad(0.0, "delta_-(h,t)=" + num(*m) + " is not below t=" + num(t));
        }
        for (std::size_t k = 1; k < images.size(); ++k) {
            if (images[k].second > images[k - 1].second)
                mono.ok();
            else
                mono.bad(0.0, "not increasing between t=" + num(images[k - 1].first) + " and t=" +
                                  num(images[k].first));
        }
        // (a) every target point has a preimage in [t0, inf)
        if (const auto ya = sh.try_minus(h, a)) {
            const auto yb = sh.try_minus(h, b);
            if (yb) {
                auto targets = sample_pool(ts, *ya, *yb, samples / 4, rng);
                for (double y : targets) {
                    const auto pre = sh.try_plus(h, y);
                    if (!pre || *pre < spec.t0()) {
                        onto.bad(1.0, "no preimage in [t0, inf) for y=" + num(y));
                        continue;
                    }
                    const auto back = sh.try_minus(h, *pre);
                    if (back)
                        onto.expect_eq(*back, y, "delta_-(h, delta_+(h,y)) at y=" + num(y));
                    else
                        onto.bad(1.0, "round trip undefined at y=" + num(y));
                }
            }
        }
    }
    return rep;
}

}  // namespace tscale
