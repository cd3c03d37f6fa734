#include "tscale/halanay.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "tscale/detail/compensated_sum.hpp"
#include "tscale/detail/format.hpp"
#include "tscale/error.hpp"

namespace tscale {

namespace {

std::string num(double v) { return detail::format_real(v); }

}  // namespace

std::string_view to_string(HalanayForm f) noexcept {
    switch (f) {
        case HalanayForm::SumPower: return "sum";
        case HalanayForm::SupForm: return "sup";
        case HalanayForm::ProductForm: return "product";
        case HalanayForm::MaxForm: return "max";
    }
    return "unknown";
}

void HalanayProblem::validate() const {
    const std::size_t n = spec.r() + 1;
    if (!(Kconst > 1.0)) throw Error(Errc::InvalidProblem, "K must exceed 1");
    switch (form) {
        case HalanayForm::SumPower:
            if (q.size() != n)
                throw Error(Errc::InvalidProblem, "sum form needs q_0..q_r (" + std::to_string(n) +
                                                      " coefficients), got " + std::to_string(q.size()));
            break;
        case HalanayForm::SupForm:
        case HalanayForm::MaxForm:
            if (q.size() != 1) throw Error(Errc::InvalidProblem, "sup/max forms take a single q");
            break;
        case HalanayForm::ProductForm: {
            if (q.size() != n || alpha.size() != n)
                throw Error(Errc::InvalidProblem, "product form needs beta_i and alpha_i for i=0..r");
            double sum = 0.0;
            for (double a : alpha) {
                if (!(a > 0.0)) throw Error(Errc::InvalidProblem, "alpha_i must be positive");
                sum += a;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw Error(Errc::InvalidProblem, "alpha_i must sum to 1, got " + num(sum));
            break;
        }
    }
    if (form != HalanayForm::ProductForm && !(ell > 0.0 && ell <= 1.0))
        throw Error(Errc::InvalidProblem, "ell must lie in (0, 1]");
}

double mu_tilde(const HalanayProblem& problem, double t) {
    return problem.ts().mu_tilde(t, problem.spec.window_start());
}

std::pair<double, double> s_window(const HalanayProblem& problem, double t, double floor) {
    const double mt = mu_tilde(problem, t);
    return {mt > 0.0 ? -1.0 / mt : floor, 0.0};
}

// ---------------------------------------------------------------------------

CharacteristicFunction::CharacteristicFunction(const HalanayProblem& pr, double t) {
    pr.validate();
    const TimeScale& ts = pr.ts();
    t_ = ts.member(t);
    if (t_ < pr.t0()) throw Error(Errc::OutOfDomain, "P(t, k) needs t >= t0, got " + num(t));
    const double t0 = pr.t0();
    mu_tilde_ = ts.mu_tilde(t_, pr.spec.window_start());
    p_ = pr.p(t_);
    const std::size_t r = pr.spec.r();
    const double dr = pr.spec.apply(r, t_);
    switch (pr.form) {
        case HalanayForm::SumPower: {
            lead_ = {{1.0, profile(ts, t_, dr)}, {1.0 - pr.ell, profile(ts, dr, t0)}};
            const double kfac = std::pow(pr.Kconst, pr.ell - 1.0);
            for (std::size_t i = 0; i <= r; ++i) {
                const double di = pr.spec.apply(i, t_);
                terms_.push_back({kfac * pr.q[i](t_), {{pr.ell, profile(ts, di, dr)}}});
            }
            break;
        }
        case HalanayForm::SupForm:
        case HalanayForm::MaxForm:
            lead_ = {{1.0, profile(ts, t_, t0)}};
            terms_.push_back({std::pow(pr.Kconst, pr.ell) * pr.q[0](t_), {{pr.ell, profile(ts, dr, t0)}}});
            break;
        case HalanayForm::ProductForm: {
            lead_ = {{1.0, profile(ts, t_, t0)}};
            Term term{1.0, {}};
            for (std::size_t i = 0; i <= r; ++i) {
                term.coef *= pr.q[i](t_);
                term.factors.push_back({pr.alpha[i], profile(ts, pr.spec.apply(i, t_), t0)});
            }
            terms_.push_back(std::move(term));
            break;
        }
    }
}

std::size_t CharacteristicFunction::profile(const TimeScale& ts, double a, double b) {
    profiles_.push_back(ExpProfile::between(ts, a, b));
    return profiles_.size() - 1;
}

double CharacteristicFunction::log_factor(const std::vector<Factor>& fs, double k) const {
    double s = 0.0;
    for (const auto& f : fs)
        if (f.weight != 0.0) s += f.weight * profiles_[f.profile].log_e(k);
    return s;
}

void CharacteristicFunction::check_k(double k) const {
    if (!(1.0 + mu_tilde_ * k > 0.0))
        throw Error(Errc::OutsideS, "k=" + num(k) + " has 1 + mu_tilde k <= 0 at t=" + num(t_));
}

double CharacteristicFunction::eval(double k, bool scale) const {
    check_k(k);
    const double la = log_factor(lead_, k);
    std::vector<double> lb(terms_.size());
    double m = la;
    for (std::size_t j = 0; j < terms_.size(); ++j) {
        lb[j] = log_factor(terms_[j].factors, k);
        m = std::max(m, lb[j]);
    }
    if (!scale) m = 0.0;
    detail::CompensatedSum s;
    s += (k + p_) * std::exp(la - m);
    for (std::size_t j = 0; j < terms_.size(); ++j) s += -terms_[j].coef * std::exp(lb[j] - m);
    return s.value();
}

double CharacteristicFunction::value(double k) const { return eval(k, false); }
double CharacteristicFunction::scaled(double k) const { return eval(k, true); }

double char_poly(const HalanayProblem& problem, double t, double k) {
    return CharacteristicFunction(problem, t).value(k);
}

// ---------------------------------------------------------------------------

namespace {

struct Bracket {
    double lo;  // P < 0
    double hi;  // P > 0
    bool exact = false;
};

// Scans from 0 down to `lower`; nullopt when no + to - change is seen.
std::optional<Bracket> scan(const CharacteristicFunction& P, double lower, bool boundary,
                            const RootOptions& opt, double& min_abs) {
    double prev_k = 0.0;
    double prev_f = P.scaled(0.0);
    if (!(prev_f > 0.0))
        throw Error(Errc::NoSignChange, "P(t,0) = " + num(P.value(0.0)) + " is not positive at t=" + num(P.t()));
    const double tol = opt.tol;
    const int n = std::max(2, opt.scan_points);
    for (int j = 0; j < n; ++j) {
        const double g = tol * std::pow((1.0 - tol) / tol, static_cast<double>(j) / (n - 1));
        const double k = lower * g;
        const double f = P.scaled(k);
        if (f == 0.0) return Bracket{k, k, true};
        if (f < 0.0) return Bracket{k, prev_k};
        min_abs = std::min(min_abs, std::abs(f));
        prev_k = k;
        prev_f = f;
    }
    // A root hugging the boundary of S(t): creep closer while 1 + mu_tilde k stays positive.
    if (boundary) {
        for (double gap = tol * 0.1; gap > 0.0; gap *= 0.1) {
            const double k = lower * (1.0 - gap);
            if (!(1.0 + P.mu_tilde() * k > 0.0) || k == prev_k) break;
            const double f = P.scaled(k);
            if (f == 0.0) return Bracket{k, k, true};
            if (f < 0.0) return Bracket{k, prev_k};
            min_abs = std::min(min_abs, std::abs(f));
            prev_k = k;
        }
    }
    return std::nullopt;
}

}  // namespace

Root largest_root(const HalanayProblem& problem, double t, const RootOptions& opt) {
    const CharacteristicFunction P(problem, t);
    const double mt = P.mu_tilde();
    Root out;
    out.t = P.t();
    out.mu_tilde = mt;
    out.s_lower = mt > 0.0 ? -1.0 / mt : opt.report_floor;

    double lower = mt > 0.0 ? -1.0 / mt : opt.dense_floor;
    double min_abs = kInf;
    auto br = scan(P, lower, mt > 0.0, opt, min_abs);
    if (!br && mt == 0.0) {
        lower *= opt.deepen;
        br = scan(P, lower, false, opt, min_abs);
    }
    if (!br) {
        if (min_abs <= opt.tol)
            throw Error(Errc::NotBracketed, "P(t, .) touches zero without crossing at t=" + num(out.t));
        throw Error(Errc::NoSignChange, "no sign change of P(t, .) on (" + num(lower) + ", 0) at t=" + num(out.t));
    }
    double lo = br->lo, hi = br->hi;
    // Bisect until the bracket stops shrinking: an absolute residual test would
    // lose relative accuracy when S(t) is tiny.
    if (!br->exact) {
        while (true) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double f = P.scaled(mid);
            if (f == 0.0) {
                lo = hi = mid;
                break;
            }
            (f > 0.0 ? hi : lo) = mid;
        }
    }
    out.lambda = 0.5 * (lo + hi);
    out.residual = std::abs(P.value(out.lambda));
    return out;
}

// ---------------------------------------------------------------------------

double RootField::lambda_at(double t) const {
    if (grid.empty()) throw Error(Errc::FieldGap, "empty root field");
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    std::size_t j = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
    if (std::isnan(lambda[j]))
        throw Error(Errc::FieldGap, "no root at grid time " + num(grid[j]) + ": " + errors[j]);
    return lambda[j];
}

std::optional<double> RootField::constant() const {
    if (grid.empty()) return std::nullopt;
    double lo = kInf, hi = -kInf;
    for (double l : lambda) {
        if (std::isnan(l)) return std::nullopt;
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    if (hi - lo > tol) return std::nullopt;
    return lambda.front();
}

std::vector<double> RootField::log_exp_series(const TimeScale& ts,
                                              const std::vector<double>& times) const {
    if (grid.empty()) throw Error(Errc::FieldGap, "empty root field");
    std::vector<double> out(times.size());
    const double g0 = grid.front();
    auto lam = [this](std::size_t j) {
        if (std::isnan(lambda[j]))
            throw Error(Errc::FieldGap, "no root at grid time " + num(grid[j]) + ": " + errors[j]);
        return lambda[j];
    };
    std::size_t j = 0;
    double cur_t = g0;
    double cur_L = 0.0;
    for (std::size_t n = 0; n < times.size(); ++n) {
        const double x = ts.member(times[n]);
        if (n > 0 && x < ts.member(times[n - 1]))
            throw Error(Errc::PreconditionViolated, "times must be increasing");
        if (x < g0) {
            out[n] = ExpProfile::between(ts, x, g0).log_e(lam(0));
            continue;
        }
        while (j + 1 < grid.size() && grid[j + 1] <= x) {
            cur_L += ExpProfile::between(ts, grid[j + 1], cur_t).log_e(lam(j));
            cur_t = grid[j + 1];
            ++j;
        }
        cur_L += ExpProfile::between(ts, x, cur_t).log_e(lam(j));
        cur_t = x;
        out[n] = cur_L;
    }
    return out;
}

double RootField::log_exp(const TimeScale& ts, double t) const { return log_exp_series(ts, {t})[0]; }

RootField root_field(const HalanayProblem& problem, const std::vector<double>& grid,
                     const RootOptions& opt, double jump_threshold) {
    problem.validate();
    RootField f;
    f.tol = opt.tol;
    const std::size_t n = grid.size();
    f.grid.resize(n);
    f.lambda.assign(n, std::nan(""));
    f.residual.assign(n, std::nan(""));
    f.s_lower.assign(n, std::nan(""));
    f.errors.assign(n, {});
    f.jump.assign(n, false);
    if (n == 0) return f;

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            f.grid[j] = grid[j];
            try {
                const Root r = largest_root(problem, grid[j], opt);
                f.grid[j] = r.t;
                f.lambda[j] = r.lambda;
                f.residual[j] = r.residual;
                f.s_lower[j] = r.s_lower;
            } catch (const Error& e) {
                f.errors[j] = e.what();
            }
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t tasks = std::min(hw, (n + 15) / 16);
    if (tasks <= 1) {
        work(0, n);
    } else {
        std::vector<std::future<void>> futs;
        const std::size_t chunk = (n + tasks - 1) / tasks;
        for (std::size_t b = 0; b < n; b += chunk)
            futs.push_back(std::async(std::launch::async, work, b, std::min(n, b + chunk)));
        for (auto& fu : futs) fu.get();
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!f.errors[j].empty()) f.partial = true;
        if (j > 0 && !std::isnan(f.lambda[j]) && !std::isnan(f.lambda[j - 1]))
            f.jump[j] = std::abs(f.lambda[j] - f.lambda[j - 1]) > jump_threshold;
        if (j > 0 && !(f.grid[j] > f.grid[j - 1]))
            throw Error(Errc::PreconditionViolated, "root grid must be strictly increasing");
    }
    return f;
}

}  // namespace tscale
