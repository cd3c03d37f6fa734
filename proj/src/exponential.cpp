#include "tscale/exponential.hpp"

#include <algorithm>
#include <cmath>

#include "tscale/detail/compensated_sum.hpp"
#include "tscale/detail/format.hpp"
#include "tscale/error.hpp"

namespace tscale {

namespace {

std::string num(double v) { return detail::format_real(v); }

double cylinder_log(double mu, double p, double r) {
    const double mp = mu * p;
    const double v = 1.0 + mp;
    if (std::abs(v) <= kRegressTol * std::max(1.0, std::abs(mp)))
        throw Error(Errc::NotRegressive, "1 + mu p = 0 at t=" + num(r));
    if (v < 0.0)
        throw Error(Errc::NegativeOneplus, "1 + mu p = " + num(v) + " < 0 at t=" + num(r));
    return std::log1p(mp);
}

double log_exp_forward(const TimeScale& ts, const Coefficient& p, double a, double b,
                       const GridPolicy& policy) {
    if (a == b) return 0.0;
    if (const auto k = p.constant_value()) {
        const auto prof = ts.grain_profile(a, b);
        detail::CompensatedSum sum;
        sum += *k * prof.dense_length;
        for (const auto& [mu, count] : prof.grains)
            sum += static_cast<double>(count) * cylinder_log(mu, *k, a);
        return sum.value();
    }
    return delta_integral_split(
        ts, [&p](double r) { return p(r); },
        [&p](double r, double mu) { return cylinder_log(mu, p(r), r); }, a, b, policy, p.knots());
}

Coefficient negated(const Coefficient& c) {
    if (const auto k = c.constant_value()) return Coefficient(-*k);
    return Coefficient::callable([c](double t) { return -c(t); }, "-(" + c.label() + ")");
}

}  // namespace

double log_exp_ts(const TimeScale& ts, const Coefficient& p, double t, double s,
                  const GridPolicy& policy) {
    const double x = ts.member(t);
    const double y = ts.member(s);
    if (x >= y) return log_exp_forward(ts, p, y, x, policy);
    return -log_exp_forward(ts, p, x, y, policy);
}

double exp_ts(const TimeScale& ts, const Coefficient& p, double t, double s,
              const GridPolicy& policy) {
    const double v = std::exp(log_exp_ts(ts, p, t, s, policy));
    if (!(v >= 0.0)) throw Error(Errc::NotRegressive, "exponential is not positive");
    return v;
}

double log_exp_ominus_ts(const TimeScale& ts, const Coefficient& p, double t, double s,
                         const GridPolicy& policy) {
    const double x = ts.member(t);
    const double y = ts.member(s);
    const double a = std::min(x, y), b = std::max(x, y);
    if (a == b) return 0.0;
    const double v = delta_integral_split(
        ts, [&p](double r) { return -p(r); },
        [&p](double r, double mu) {
            const double pr = p(r);
            const double om = -pr / (1.0 + mu * pr);
            if (!std::isfinite(om)) throw Error(Errc::NotRegressive, "1 + mu p = 0 at t=" + num(r));
            return cylinder_log(mu, om, r);
        },
        a, b, policy, p.knots());
    return x >= y ? v : -v;
}

double ominus(const Coefficient& p, const TimeScale& ts, double t) {
    const double mu = ts.mu(t);
    const double pt = p(ts.member(t));
    const double v = 1.0 + mu * pt;
    if (std::abs(v) <= kRegressTol * std::max(1.0, std::abs(mu * pt)))
        throw Error(Errc::NotRegressive, "1 + mu p = 0 at t=" + num(t));
    return -pt / v;
}

bool positively_regressive(const TimeScale& ts, const Coefficient& p, double s, double t) {
    bool ok = true;
    ts.for_each_scattered(s, t, [&](double r, double mu) {
        if (!(1.0 + mu * p(r) > kRegressTol)) ok = false;
    });
    return ok;
}

ExpProfile ExpProfile::between(const TimeScale& ts, double t, double s) {
    const double x = ts.member(t);
    const double y = ts.member(s);
    ExpProfile out;
    if (x >= y) {
        out.grains = ts.grain_profile(y, x);
    } else {
        out.grains = ts.grain_profile(x, y);
        out.sign = -1.0;
    }
    return out;
}

double ExpProfile::log_e(double k) const {
    detail::CompensatedSum sum;
    sum += k * grains.dense_length;
    for (const auto& [mu, count] : grains.grains)
        sum += static_cast<double>(count) * cylinder_log(mu, k, mu);
    return sign * sum.value();
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kIdentityRtol = 1e-9;

void record(CheckResult& c, double rel, const std::string& witness) {
    ++c.evaluated;
    c.worst = std::max(c.worst, rel);
    if (!(rel <= kIdentityRtol)) c.fail(witness + ": relative error " + num(rel));
}

// Relative error between values whose logs differ by d.
double rel_from_log(double d) { return std::abs(std::expm1(d)); }

}  // namespace

CheckReport check_exp_identities(const TimeScale& ts, const Coefficient& p,
                                 const std::vector<std::array<double, 3>>& triples,
                                 const GridPolicy& policy) {
    CheckReport rep;
    rep.add("(i) trivial");
    rep.add("(ii) sigma step");
    rep.add("(iii) ominus reciprocal");
    rep.add("(iv) reciprocal");
    rep.add("(v) semigroup");
    rep.add("positivity");
    auto& c1 = rep.checks[0];
    auto& c2 = rep.checks[1];
    auto& c3 = rep.checks[2];
    auto& c4 = rep.checks[3];
    auto& c5 = rep.checks[4];
    auto& c6 = rep.checks[5];
    const Coefficient zero(0.0);
    for (const auto& tri : triples) {
        const double t = ts.member(tri[0]);
        const double s = ts.member(tri[1]);
        const double r = ts.member(tri[2]);
        const std::string w = "(t,s,r)=(" + num(t) + "," + num(s) + "," + num(r) + ")";

        const double ltt = log_exp_ts(ts, p, t, t, policy);
        const double l0 = log_exp_ts(ts, zero, t, s, policy);
        record(c1, std::max(rel_from_log(ltt), rel_from_log(l0)), w);

        const double lts = log_exp_ts(ts, p, t, s, policy);
        const double lst = log_exp_ts(ts, p, s, t, policy);
        const double lsr = log_exp_ts(ts, p, s, r, policy);
        const double ltr = log_exp_ts(ts, p, t, r, policy);

        for (double x : {t, s, r}) {
            if (!ts.right_scattered(x)) continue;
            const double sx = ts.sigma(x);
            const double mu = sx - x;
            const double lhs = log_exp_ts(ts, p, sx, s, policy);
            const double rhs = std::log1p(mu * p(x)) + log_exp_ts(ts, p, x, s, policy);
            record(c2, rel_from_log(lhs - rhs), w + " at x=" + num(x));
        }

        const double lom = log_exp_ominus_ts(ts, p, t, s, policy);
        record(c3, rel_from_log(lts + lom), w);

        const double lom_st = log_exp_ominus_ts(ts, p, s, t, policy);
        record(c4, std::max(rel_from_log(lts + lst), rel_from_log(lts - lom_st)), w);

        record(c5, rel_from_log(lts + lsr - ltr), w);

        ++c6.evaluated;
        if (!(std::exp(lts) > 0.0) && positively_regressive(ts, p, std::min(t, s), std::max(t, s)))
            c6.fail(w + ": e_p(t,s) not positive");
    }
    return rep;
}

CheckReport exp_bounds_check(const TimeScale& ts, const Coefficient& phi, double s, double t,
                             const GridPolicy& policy) {
    const double a = ts.member(s);
    const double b = ts.member(t);
    if (a > b) throw Error(Errc::EmptyWindow, "exp_bounds_check requires s <= t");
    const Coefficient mphi = negated(phi);
    ts.for_each_scattered(a, b, [&](double r, double mu) {
        if (phi(r) < 0.0)
            throw Error(Errc::PreconditionViolated, "phi is negative at t=" + num(r));
        if (!(1.0 + mu * mphi(r) > 0.0))
            throw Error(Errc::PreconditionViolated, "-phi is not positively regressive at t=" + num(r));
    });
    const double I = delta_integral(ts, [&phi](double r) { return phi(r); }, a, b, policy);
    const double em = exp_ts(ts, mphi, b, a, policy);
    const double ep = exp_ts(ts, phi, b, a, policy);

    CheckReport rep;
    auto check = [&rep](const std::string& name, double lo, double hi) {
        auto& c = rep.add(name);
        c.evaluated = 1;
        const double margin = hi - lo;
        c.worst = margin;
        const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
        if (margin < -slack) c.fail(num(lo) + " > " + num(hi));
    };
    check("1-I <= e_{-phi}", 1.0 - I, em);
    check("e_{-phi} <= exp(-I)", em, std::exp(-I));
    check("0 < e_{-phi}", std::nextafter(0.0, 1.0), em);
    check("1+I <= e_phi", 1.0 + I, ep);
    check("e_phi <= exp(I)", ep, std::exp(I));
    return rep;
}

}  // namespace tscale
