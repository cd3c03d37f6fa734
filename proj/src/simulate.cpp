#include "tscale/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "tscale/detail/format.hpp"
#include "tscale/error.hpp"

namespace tscale {

namespace {

std::string num(double v) { return detail::format_real(v); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

double power(double x, double e) {
    if (e == 1.0) return x;
    if (x == 0.0) return 0.0;
    if (x < 0.0) {
        if (e == std::floor(e)) return std::pow(x, e);
        throw Error(Errc::NegativeBaseFractionalPower, num(x) + "^" + num(e));
    }
    return std::pow(x, e);
}

double hermite(const TrajectorySample& a, const TrajectorySample& b, double t) {
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a.x + (s3 - 2 * s2 + s) * h * a.slope + (-2 * s3 + 3 * s2) * b.x +
           (s3 - s2) * h * b.slope;
}

double interpolate(const std::vector<TrajectorySample>& v, std::size_t j, double t, Interp mode) {
    const auto& a = v[j];
    const auto& b = v[j + 1];
    if (a.mu > 0.0)
        throw Error(Errc::NotInTimeScale, num(t) + " falls in the gap after the scattered point " + num(a.t));
    if (mode == Interp::HermiteDense && std::isfinite(a.slope) && std::isfinite(b.slope))
        return hermite(a, b, t);
    const double w = (t - a.t) / (b.t - a.t);
    return (1.0 - w) * a.x + w * b.x;
}

// Index j with v[j].t <= t < v[j+1].t, or the exact match.
std::optional<std::size_t> exact_index(const std::vector<TrajectorySample>& v, double t, std::size_t& j) {
    auto it = std::lower_bound(v.begin(), v.end(), t,
                               [](const TrajectorySample& s, double x) { return s.t < x; });
    if (it != v.end() && same_time(it->t, t)) return static_cast<std::size_t>(it - v.begin());
    if (it != v.begin() && same_time(std::prev(it)->t, t))
        return static_cast<std::size_t>(it - v.begin()) - 1;
    j = it == v.begin() ? 0 : static_cast<std::size_t>(it - v.begin()) - 1;
    return std::nullopt;
}

void validate_rhs(const RhsSpec& rhs, std::size_t r) {
    const std::size_t n = r + 1;
    switch (rhs.form) {
        case RhsForm::SumPowerEq:
        case RhsForm::Custom:
            if (rhs.q.size() != n)
                throw Error(Errc::InvalidProblem, std::string(to_string(rhs.form)) + " needs q_0..q_r (" +
                                                      std::to_string(n) + " coefficients), got " +
                                                      std::to_string(rhs.q.size()));
            if (rhs.form == RhsForm::Custom && !rhs.custom)
                throw Error(Errc::InvalidProblem, "custom RHS without a function");
            break;
        case RhsForm::SupEq:
        case RhsForm::MaxEq:
            if (rhs.q.size() != 1) throw Error(Errc::InvalidProblem, "sup/max RHS takes a single q");
            break;
        case RhsForm::ProductEq:
            if (rhs.q.size() != n || rhs.alpha.size() != n)
                throw Error(Errc::InvalidProblem, "product RHS needs beta_i and alpha_i for i=0..r");
            break;
    }
    if (rhs.form != RhsForm::ProductEq && !(rhs.ell > 0.0 && rhs.ell <= 1.0))
        throw Error(Errc::InvalidProblem, "ell must lie in (0, 1]");
}

bool fractional(const RhsSpec& rhs) {
    if (rhs.form == RhsForm::Custom) return false;
    if (rhs.form == RhsForm::ProductEq)
        return std::any_of(rhs.alpha.begin(), rhs.alpha.end(), [](double a) { return a != std::floor(a); });
    return rhs.ell != 1.0;
}

class Stepper {
public:
    Stepper(const DelaySpec& spec, const RhsSpec& rhs, const HistoryFunction& hist, Interp mode)
        : spec_(spec), rhs_(rhs), hist_(hist), mode_(mode), r_(spec.r()), xs_(r_ + 1) {}

    std::vector<TrajectorySample> samples;
    double ws = 0.0;
    double t0 = 0.0;

    void push(const TrajectorySample& s) {
        samples.push_back(s);
        const std::size_t i = samples.size() - 1;
        if (i % kBlock == 0) block_max_.push_back(s.x);
        else block_max_.back() = std::max(block_max_.back(), s.x);
    }

    // x(s) for s <= current time; `cur_t`, `cur_x` is the state being stepped.
    double read(double s, double cur_t, double cur_x) const {
        if (same_time(s, cur_t)) return cur_x;
        if (s < t0 && !same_time(s, t0)) {
            if (s < ws && !same_time(s, ws))
                throw Error(Errc::HistoryGap, "delayed time " + num(s) + " precedes the history window");
            return checked_history(s);
        }
        std::size_t j = 0;
        if (auto k = exact_index(samples, s, j)) return samples[*k].x;
        if (s > samples.back().t || j + 1 >= samples.size())
            throw Error(Errc::HistoryGap, "delayed time " + num(s) + " is ahead of the solution (t=" +
                                              num(samples.back().t) + "); the delay is shorter than the step");
        return interpolate(samples, j, s, mode_);
    }

    double checked_history(double s) const {
        const double v = hist_(s);
        if (!std::isfinite(v)) throw Error(Errc::HistoryGap, "history is not finite at t=" + num(s));
        return v;
    }

    // max x over [a, cur_t] using stored samples, both endpoints and the current state.
    double window_max(double a, double cur_t, double cur_x) const {
        double m = std::max(read(a, cur_t, cur_x), cur_x);
        auto lo = std::lower_bound(samples.begin(), samples.end(), a,
                                   [](const TrajectorySample& s, double x) { return s.t < x; });
        auto hi = std::lower_bound(samples.begin(), samples.end(), cur_t,
                                   [](const TrajectorySample& s, double x) { return s.t < x; });
        std::size_t i = static_cast<std::size_t>(lo - samples.begin());
        const std::size_t e = static_cast<std::size_t>(hi - samples.begin());
        while (i < e) {
            if (i % kBlock == 0 && i + kBlock <= e) {
                m = std::max(m, block_max_[i / kBlock]);
                i += kBlock;
            } else {
                m = std::max(m, samples[i].x);
                ++i;
            }
        }
        return m;
    }

    // -p x + F at (t, x).
    double rhs(double t, double x) {
        if (x < 0.0 && fractional(rhs_))
            throw Error(Errc::NegativeBaseFractionalPower, "x(" + num(t) + ") = " + num(x) + " < 0 with a fractional power");
        double F = 0.0;
        switch (rhs_.form) {
            case RhsForm::SumPowerEq:
                for (std::size_t i = 0; i <= r_; ++i)
                    F += rhs_.q[i](t) * power(read(spec_.apply(i, t), t, x), rhs_.ell);
                break;
            case RhsForm::SupEq:
                F = rhs_.q[0](t) * power(window_max(spec_.apply(r_, t), t, x), rhs_.ell);
                break;
            case RhsForm::MaxEq: {
                double m = -kInf;
                for (std::size_t i = 0; i <= r_; ++i) m = std::max(m, read(spec_.apply(i, t), t, x));
                F = rhs_.q[0](t) * power(m, rhs_.ell);
                break;
            }
            case RhsForm::ProductEq:
                F = 1.0;
                for (std::size_t i = 0; i <= r_; ++i)
                    F *= rhs_.q[i](t) * power(read(spec_.apply(i, t), t, x), rhs_.alpha[i]);
                break;
            case RhsForm::Custom:
                for (std::size_t i = 0; i <= r_; ++i) xs_[i] = read(spec_.apply(i, t), t, x);
                F = rhs_.custom(t, xs_);
                break;
        }
        const double v = -rhs_.p(t) * x + F + rhs_.offset;
        if (!std::isfinite(v)) throw Error(Errc::InvalidProblem, "RHS is not finite at t=" + num(t));
        return v;
    }

private:
    static constexpr std::size_t kBlock = 64;

    const DelaySpec& spec_;
    const RhsSpec& rhs_;
    const HistoryFunction& hist_;
    Interp mode_;
    std::size_t r_;
    std::vector<double> xs_;
    std::vector<double> block_max_;
};

}  // namespace

// ---------------------------------------------------------------------------

HistoryFunction HistoryFunction::constant(double c) {
    HistoryFunction h;
    h.kind_ = Kind::Constant;
    h.const_ = c;
    h.fn_ = [c](double) { return c; };
    h.label_ = "const:" + num(c);
    return h;
}

HistoryFunction HistoryFunction::table(std::vector<double> t, std::vector<double> v) {
    if (t.empty() || t.size() != v.size())
        throw Error(Errc::HistoryGap, "history table needs matching, non-empty columns");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw Error(Errc::HistoryGap, "history table times must increase");
    HistoryFunction h;
    h.kind_ = Kind::Tabulated;
    h.label_ = "table";
    for (std::size_t i = 0; i < t.size(); ++i) h.rows_.emplace_back(t[i], v[i]);
    h.fn_ = [rows = h.rows_](double x) {
        const double tol = 1e-12 * std::max(1.0, std::abs(x));
        if (x < rows.front().first - tol || x > rows.back().first + tol)
            throw Error(Errc::HistoryGap, "history table does not cover t=" + num(x));
        auto it = std::lower_bound(rows.begin(), rows.end(), x,
                                   [](const auto& row, double y) { return row.first < y; });
        if (it == rows.end()) return rows.back().second;
        if (it == rows.begin() || std::abs(it->first - x) <= tol) return it->second;
        const auto& a = *std::prev(it);
        const double w = (x - a.first) / (it->first - a.first);
        return (1.0 - w) * a.second + w * it->second;
    };
    return h;
}

HistoryFunction HistoryFunction::callable(std::function<double(double)> fn, std::string label) {
    HistoryFunction h;
    h.kind_ = Kind::Callable;
    h.fn_ = std::move(fn);
    h.label_ = std::move(label);
    return h;
}

double HistoryFunction::operator()(double t) const { return fn_(t); }

// ---------------------------------------------------------------------------

double Trajectory::at(double t) const {
    if (samples.empty()) throw Error(Errc::OutOfDomain, "empty trajectory");
    std::size_t j = 0;
    if (auto k = exact_index(samples, t, j)) return samples[*k].x;
    if (t < samples.front().t || t > samples.back().t)
        throw Error(Errc::OutOfDomain, num(t) + " is outside the trajectory");
    return interpolate(samples, j, t, interp);
}

std::vector<double> Trajectory::times() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.t);
    return out;
}

std::vector<double> Trajectory::values() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.x);
    return out;
}

std::string_view to_string(RhsForm f) noexcept {
    switch (f) {
        case RhsForm::SumPowerEq: return "sum";
        case RhsForm::SupEq: return "sup";
        case RhsForm::MaxEq: return "max";
        case RhsForm::ProductEq: return "product";
        case RhsForm::Custom: return "custom";
    }
    return "unknown";
}

RhsSpec RhsSpec::from_problem(const HalanayProblem& problem) {
    RhsSpec s;
    switch (problem.form) {
        case HalanayForm::SumPower: s.form = RhsForm::SumPowerEq; break;
        case HalanayForm::SupForm: s.form = RhsForm::SupEq; break;
        case HalanayForm::MaxForm: s.form = RhsForm::MaxEq; break;
        case HalanayForm::ProductForm: s.form = RhsForm::ProductEq; break;
    }
    s.p = problem.p;
    s.q = problem.q;
    s.ell = problem.ell;
    s.alpha = problem.alpha;
    s.declared_monotone = true;
    return s;
}

HalanayProblem RhsSpec::dominating_problem(const DelaySpec& spec, double Kconst) const {
    HalanayForm f = HalanayForm::SumPower;
    switch (form) {
        case RhsForm::SumPowerEq:
        case RhsForm::Custom: f = HalanayForm::SumPower; break;
        case RhsForm::SupEq: f = HalanayForm::SupForm; break;
        case RhsForm::MaxEq: f = HalanayForm::MaxForm; break;
        case RhsForm::ProductEq: f = HalanayForm::ProductForm; break;
    }
    return HalanayProblem{spec, f, p, q, ell, alpha, Kconst};
}

// ---------------------------------------------------------------------------

Trajectory simulate(const DelaySpec& spec, const RhsSpec& rhs, const HistoryFunction& history,
                    double T_end, const GridPolicy& policy, Interp interp) {
    policy.validate();
    validate_rhs(rhs, spec.r());
    const TimeScale& ts = spec.ts();
    const double t0 = spec.t0();
    if (!(T_end > t0)) throw Error(Errc::PreconditionViolated, "T_end must exceed t0");
    const double tend = ts.member(T_end);

    Stepper st(spec, rhs, history, interp);
    st.t0 = t0;
    st.ws = spec.window_start();
    const bool positive_only = fractional(rhs);

    for (const auto& p : ts.iterate_points(st.ws, t0, policy)) {
        if (same_time(p.t, t0)) break;
        const double v = st.checked_history(p.t);
        if (positive_only && !(v > 0.0))
            throw Error(Errc::NegativeBaseFractionalPower, "fractional powers need a positive history; phi(" +
                                                               num(p.t) + ") = " + num(v));
        st.push({p.t, v, ts.mu(p.t), p.kind, kNaN});
    }
    double x = st.checked_history(t0);
    if (positive_only && !(x > 0.0))
        throw Error(Errc::NegativeBaseFractionalPower, "fractional powers need a positive history; phi(t0) = " + num(x));

    const auto pts = ts.iterate_points(t0, tend, policy);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double tk = pts[k].t;
        const double mu = ts.mu(tk);
        const double f1 = st.rhs(tk, x);
        st.push({tk, x, mu, pts[k].kind, f1});
        if (k + 1 == pts.size()) break;
        const double tn = pts[k + 1].t;
        if (mu > 0.0) {
            if (!same_time(tn, tk + mu))
                throw Error(Errc::PreconditionViolated, "grid skips sigma(" + num(tk) + ")");
            x = x + mu * f1;
        } else {
            const double h = tn - tk;
            const double tm = tk + 0.5 * h;
            const double f2 = st.rhs(tm, x + 0.5 * h * f1);
            const double f3 = st.rhs(tm, x + 0.5 * h * f2);
            const double f4 = st.rhs(tn, x + h * f3);
            x = x + h / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
        }
    }

    Trajectory out;
    out.samples = std::move(st.samples);
    out.interp = interp;
    out.t0 = t0;
    out.dense_step = policy.dense_step;
    out.solver = interp == Interp::LinearDense ? "euler+rk4/linear" : "euler+rk4/hermite";
    return out;
}

Trajectory simulate_exponential_candidate(const TimeScale& ts, const RootField& field, double K,
                                          double T_end, const GridPolicy& policy) {
    if (field.empty()) throw Error(Errc::FieldGap, "empty root field");
    if (!(K > 0.0)) throw Error(Errc::PreconditionViolated, "K must be positive");
    const double t0 = field.grid.front();
    if (T_end < t0) throw Error(Errc::FieldGap, "T_end precedes the root field");
    const auto pts = ts.iterate_points(t0, T_end, policy);
    std::vector<double> times;
    times.reserve(pts.size());
    for (const auto& p : pts) times.push_back(p.t);
    const auto logs = field.log_exp_series(ts, times);
    Trajectory out;
    out.t0 = t0;
    out.dense_step = policy.dense_step;
    out.solver = "exponential";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double lam = field.lambda_at(times[i]);
        const double x = K * std::exp(logs[i]);
        out.samples.push_back({times[i], x, ts.mu(times[i]), pts[i].kind, lam * x});
    }
    return out;
}

ComparisonReport comparison_run(const DelaySpec& spec, const RhsSpec& f_super, const HistoryFunction& phi,
                                const HistoryFunction& psi, double T_end, double eps,
                                const GridPolicy& policy) {
    ComparisonReport rep;
    auto reject = [&rep](std::string why) {
        rep.status = ComparisonStatus::Rejected;
        rep.message = std::move(why);
        return rep;
    };
    if (!(eps > 0.0)) return reject("margin eps must be positive");
    if (f_super.form == RhsForm::Custom && !f_super.declared_monotone)
        return reject("custom RHS is not declared monotone in its delayed arguments");
    const TimeScale& ts = spec.ts();
    for (const auto& p : ts.iterate_points(spec.window_start(), spec.t0(), policy)) {
        const double a = phi(p.t), b = psi(p.t);
        if (!(a < b)) return reject("histories are not strictly ordered at t=" + num(p.t));
    }
    RhsSpec lower = f_super;
    lower.offset -= eps;
    rep.lower = simulate(spec, lower, phi, T_end, policy);
    rep.upper = simulate(spec, f_super, psi, T_end, policy);
    const auto& L = rep.lower.samples;
    const auto& U = rep.upper.samples;
    for (std::size_t i = 0; i < L.size() && i < U.size(); ++i) {
        if (L[i].t <= spec.t0()) continue;
        if (!(L[i].x < U[i].x)) {
            rep.status = ComparisonStatus::Violated;
            rep.first_violation = L[i].t;
            rep.message = "phi(" + num(L[i].t) + ") = " + num(L[i].x) + " >= psi = " + num(U[i].x);
            return rep;
        }
    }
    rep.message = "PASS";
    return rep;
}

}  // namespace tscale
