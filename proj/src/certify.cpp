#include "tscale/certify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <thread>

#include "tscale/detail/compensated_sum.hpp"
#include "tscale/detail/digest.hpp"
#include "tscale/detail/format.hpp"
#include "tscale/detail/rng.hpp"
#include "tscale/error.hpp"

namespace tscale {

namespace {

std::string num(double v) { return detail::format_real(v); }

constexpr double kAuditTol = 1e-12;  // slack for the non-strict 1 - mu_tilde p >= 0
constexpr int kPersistentRun = 3;

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

void observe(ConditionResult& c, double margin, double t, bool strict, double slack = 0.0) {
    ++c.evaluated;
    const bool ok = strict ? margin > 0.0 : margin >= -slack;
    if (!ok && c.passed) {
        c.passed = false;
        c.witness = t;  // first failure
    }
    if (margin < c.worst) {
        c.worst = margin;
        if (c.passed) c.witness = t;
    }
}

}  // namespace

bool AuditReport::passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed; });
}

std::vector<std::string> AuditReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : conditions)
        if (!c.passed)
            out.push_back(c.name + (c.witness ? " at t=" + num(*c.witness) : std::string()) + " (margin " +
                          num(c.worst) + ")");
    return out;
}

const ConditionResult* AuditReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

AuditReport audit_conditions(const HalanayProblem& problem, const std::vector<double>& grid, const RhsSpec* rhs,
                             unsigned long long seed) {
    problem.validate();
    if (grid.empty()) throw Error(Errc::PreconditionViolated, "audit grid is empty");
    const TimeScale& ts = problem.ts();
    const std::size_t r = problem.spec.r();
    const double ws = problem.spec.window_start();

    AuditReport rep;
    auto add = [&rep](std::string name) {
        ConditionResult c;
        c.name = std::move(name);
        rep.conditions.push_back(std::move(c));
        return rep.conditions.size() - 1;
    };
    const std::size_t c_mu = add("1-mu_tilde*p>=0");
    std::size_t c_a = 0, c_b = 0, c_main = 0;
    switch (problem.form) {
        case HalanayForm::SumPower:
            c_a = add("q_i>=0");
            c_b = add("q_r>0");
            c_main = add("p-sum(q)>0");
            break;
        case HalanayForm::SupForm:
        case HalanayForm::MaxForm:
            c_a = add("q>0");
            c_main = add("p-q>0");
            break;
        case HalanayForm::ProductForm:
            c_a = add("beta_i>0");
            c_main = add("p-prod(beta)>0");
            break;
    }

    for (double g : grid) {
        const double t = ts.member(g);
        if (t < problem.t0() && !same_time(t, problem.t0()))
            throw Error(Errc::OutOfDomain, "audit grid point " + num(t) + " precedes t0");
        const double p = problem.p(t);
        observe(rep.conditions[c_mu], 1.0 - ts.mu_tilde(t, ws) * p, t, false, kAuditTol);
        switch (problem.form) {
            case HalanayForm::SumPower: {
                detail::CompensatedSum sum;
                double qmin = kInf;
                for (std::size_t i = 0; i <= r; ++i) {
                    const double qi = problem.q[i](t);
                    sum += qi;
                    if (i < r) qmin = std::min(qmin, qi);
                }
                if (r > 0) observe(rep.conditions[c_a], qmin, t, false);
                else ++rep.conditions[c_a].evaluated;
                observe(rep.conditions[c_b], problem.q[r](t), t, true);
                observe(rep.conditions[c_main], p - sum.value(), t, true);
                break;
            }
            case HalanayForm::SupForm:
            case HalanayForm::MaxForm: {
                const double q = problem.q[0](t);
                observe(rep.conditions[c_a], q, t, true);
                observe(rep.conditions[c_main], p - q, t, true);
                break;
            }
            case HalanayForm::ProductForm: {
                double prod = 1.0, bmin = kInf;
                for (std::size_t i = 0; i <= r; ++i) {
                    const double b = problem.q[i](t);
                    prod *= b;
                    bmin = std::min(bmin, b);
                }
                observe(rep.conditions[c_a], bmin, t, true);
                observe(rep.conditions[c_main], p - prod, t, true);
                break;
            }
        }
    }
    if (rhs && rhs->form == RhsForm::Custom)
        rep.conditions.push_back(audit_rhs_bound(*rhs, problem.spec, grid, 64, seed));
    return rep;
}

ConditionResult audit_rhs_bound(const RhsSpec& rhs, const DelaySpec& spec, const std::vector<double>& grid,
                                int states_per_time, unsigned long long seed) {
    ConditionResult c;
    c.name = "declared bound";
    if (!rhs.custom) throw Error(Errc::InvalidProblem, "custom RHS without a function");
    const std::size_t n = spec.r() + 1;
    if (rhs.q.size() != n) throw Error(Errc::InvalidProblem, "declared bound needs q_0..q_r");
    const auto [lo, hi] = rhs.state_range;
    detail::Rng rng(seed);
    std::vector<double> x(n);
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 200);
    for (std::size_t g = 0; g < grid.size(); g += stride) {
        const double t = spec.ts().member(grid[g]);
        for (int k = 0; k < states_per_time + 3; ++k) {
            for (auto& v : x) {
                if (k == 0) v = 0.0;
                else if (k == 1) v = lo;
                else if (k == 2) v = hi;
                else v = rng.uniform(lo, hi);
            }
            const double F = rhs.custom(t, x);
            detail::CompensatedSum bound;
            for (std::size_t i = 0; i < n; ++i) bound += rhs.q[i](t) * std::pow(std::abs(x[i]), rhs.ell);
            const double b = bound.value();
            observe(c, b - std::abs(F), t, false, kAuditTol * std::max(1.0, b));
        }
    }
    return c;
}

double choose_K0(const HistoryFunction& history, const DelaySpec& spec, double eps_K, const GridPolicy& policy) {
    const TimeScale& ts = spec.ts();
    const double a = spec.window_start();
    const double b = spec.t0();
    double sup = 0.0;
    for (const auto& p : ts.iterate_points(a, b, policy)) sup = std::max(sup, std::abs(history(p.t)));
    for (const auto& [t, v] : history.rows()) {
        if (t < a || t > b) continue;
        if (ts.contains(t)) sup = std::max(sup, std::abs(v));
    }
    if (!std::isfinite(sup)) throw Error(Errc::HistoryGap, "history is not finite on its window");
    return (1.0 + eps_K) * std::max(1.0, sup);
}

// ---------------------------------------------------------------------------

std::string_view to_string(VerdictKind v) noexcept {
    switch (v) {
        case VerdictKind::Certified: return "Certified";
        case VerdictKind::ViolatedAt: return "ViolatedAt";
        case VerdictKind::HypothesisFailed: return "HypothesisFailed";
    }
    return "unknown";
}

std::string Verdict::to_string() const {
    switch (kind) {
        case VerdictKind::Certified: return "Certified";
        case VerdictKind::ViolatedAt: return "ViolatedAt(" + (t ? num(*t) : std::string("?")) + ")";
        case VerdictKind::HypothesisFailed: {
            std::string s = "HypothesisFailed(";
            for (std::size_t i = 0; i < failures.size(); ++i) s += (i ? "; " : "") + failures[i];
            return s + ")";
        }
    }
    return "unknown";
}

Certificate verify_bound(const TimeScale& ts, const Trajectory& traj, const RootField& field, double K0,
                         double tol_abs) {
    if (field.empty()) throw Error(Errc::FieldGap, "empty root field");
    if (!same_time(field.grid.front(), traj.t0))
        throw Error(Errc::WindowMismatch, "root field starts at " + num(field.grid.front()) +
                                              " but the trajectory's t0 is " + num(traj.t0));
    Certificate c;
    c.field = field;
    c.K0 = K0;
    c.tol_abs = tol_abs;
    std::vector<PointKind> kinds;
    for (const auto& s : traj.samples) {
        if (s.t < traj.t0 && !same_time(s.t, traj.t0)) continue;
        c.t.push_back(s.t);
        c.x.push_back(s.x);
        kinds.push_back(s.kind);
    }
    if (c.t.empty()) throw Error(Errc::WindowMismatch, "trajectory has no samples at or after t0");
    c.horizon = c.t.back();
    const auto logs = field.log_exp_series(ts, c.t);
    c.bound.resize(c.t.size());
    int run = 0;
    std::size_t run_start = 0;
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        c.bound[i] = K0 * std::exp(logs[i]);
        const double m = c.bound[i] - std::abs(c.x[i]);
        if (m < c.margin) {
            c.margin = m;
            c.margin_t = c.t[i];
        }
        const bool bad = !(m >= -tol_abs);
        if (c.verdict.kind != VerdictKind::Certified) continue;
        if (!bad) {
            run = 0;
            continue;
        }
        if (kinds[i] != PointKind::DenseSample) {
            c.verdict = {VerdictKind::ViolatedAt, c.t[i], {}};
            continue;
        }
        if (run++ == 0) run_start = i;
        c.soft_violations.push_back(c.t[i]);
        if (run >= kPersistentRun) c.verdict = {VerdictKind::ViolatedAt, c.t[run_start], {}};
    }
    return c;
}

double decay_rate(const Trajectory& traj, double window_fraction) {
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw Error(Errc::PreconditionViolated, "window_fraction must lie in (0, 1]");
    if (traj.samples.empty()) throw Error(Errc::NonpositiveTail, "empty trajectory");
    const double tend = traj.samples.back().t;
    const double cut = tend - window_fraction * (tend - traj.t0);
    std::vector<double> t, y;
    for (const auto& s : traj.samples) {
        if (s.t < cut || s.t < traj.t0) continue;
        if (!(s.x > 0.0) || !std::isfinite(s.x))
            throw Error(Errc::NonpositiveTail, "x(" + num(s.t) + ") = " + num(s.x) + " in the fitted tail");
        t.push_back(s.t);
        y.push_back(std::log(s.x));
    }
    if (t.size() < 2) throw Error(Errc::NonpositiveTail, "fewer than two samples in the fitted tail");
    detail::CompensatedSum st, sy;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
    }
    const double tm = st.value() / static_cast<double>(t.size());
    const double ym = sy.value() / static_cast<double>(t.size());
    detail::CompensatedSum sxy, sxx;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxy += (t[i] - tm) * (y[i] - ym);
        sxx += (t[i] - tm) * (t[i] - tm);
    }
    return sxy.value() / sxx.value();
}

// ---------------------------------------------------------------------------

std::vector<double> root_grid(const TimeScale& ts, double t0, double T_end, double root_step) {
    GridPolicy g;
    g.dense_step = root_step;
    std::vector<double> out;
    for (const auto& p : ts.iterate_points(t0, T_end, g)) out.push_back(p.t);
    return out;
}

std::string problem_digest(const HalanayProblem& pr) {
    std::string s = std::string(to_string(pr.form)) + "|" + pr.ts().label() + "|" +
                    std::string(to_string(pr.spec.shift().family)) + "|t0=" + num(pr.t0()) + "|h=";
    for (double h : pr.spec.delays()) s += num(h) + ",";
    s += "|p=" + pr.p.label() + "|q=";
    for (const auto& q : pr.q) s += q.label() + ",";
    s += "|ell=" + num(pr.ell) + "|alpha=";
    for (double a : pr.alpha) s += num(a) + ",";
    s += "|K=" + num(pr.Kconst);
    return detail::hex64(detail::fnv1a(s));
}

CertifyResult certify(const HalanayProblem& problem, const HistoryFunction& history, const CertifyOptions& opt,
                      const RhsSpec* rhs) {
    problem.validate();
    const TimeScale& ts = problem.ts();
    const double t0 = problem.t0();
    const double tend = ts.member(opt.T_end);
    if (!(tend > t0)) throw Error(Errc::PreconditionViolated, "T_end must exceed t0");

    CertifyResult res;
    const auto grid = root_grid(ts, t0, tend, opt.root_step);
    res.audit = audit_conditions(problem, grid, rhs, opt.seed);
    const double K0 = choose_K0(history, problem.spec, opt.eps_K, opt.policy);
    RootField field = root_field(problem, grid, opt.root);

    const RhsSpec eq = rhs ? *rhs : RhsSpec::from_problem(problem);
    std::vector<std::string> failures = res.audit.failures();
    try {
        res.trajectory = simulate(problem.spec, eq, history, tend, opt.policy);
    } catch (const Error& e) {
        if (failures.empty()) throw;
        Certificate& c = res.certificate;
        c.field = std::move(field);
        c.K0 = K0;
        c.horizon = tend;
        c.tol_abs = opt.tol_abs;
        failures.push_back(std::string("simulation: ") + e.what());
        c.verdict = {VerdictKind::HypothesisFailed, std::nullopt, failures};
        c.problem_digest = problem_digest(problem);
        return res;
    }

    Certificate c;
    if (field.partial) {
        c.field = field;
        c.K0 = K0;
        c.tol_abs = opt.tol_abs;
        c.horizon = tend;
        for (std::size_t j = 0; j < field.grid.size(); ++j)
            if (!field.errors[j].empty()) {
                failures.push_back("root at t=" + num(field.grid[j]) + ": " + field.errors[j]);
                break;
            }
    } else {
        c = verify_bound(ts, res.trajectory, field, K0, opt.tol_abs);
        if (c.verdict.kind == VerdictKind::ViolatedAt && !failures.empty())
            failures.push_back("bound exceeded at t=" + num(*c.verdict.t));
    }
    if (!failures.empty()) c.verdict = {VerdictKind::HypothesisFailed, std::nullopt, failures};
    try {
        c.decay_estimate = decay_rate(res.trajectory, opt.decay_fraction);
    } catch (const Error&) {
        c.decay_estimate.reset();
    }
    c.problem_digest = problem_digest(problem);
    res.certificate = std::move(c);
    return res;
}

// ---------------------------------------------------------------------------

std::vector<SweepCell> sweep(const SweepSpec& spec) {
    const std::size_t np = spec.p_values.size();
    const std::size_t nq = spec.q_values.size();
    const std::size_t n = np * nq;
    std::vector<SweepCell> cells(n);
    if (n == 0) return cells;
    if (spec.q_index >= spec.problem.q.size())
        throw Error(Errc::InvalidProblem, "sweep q_index " + std::to_string(spec.q_index) + " is out of range");

    auto run_cell = [&spec](SweepCell& cell) {
        HalanayProblem pr = spec.problem;
        pr.p = Coefficient(cell.p);
        pr.q[spec.q_index] = Coefficient(cell.q);
        try {
            const auto res = certify(pr, spec.history, spec.options);
            cell.verdict = res.certificate.verdict.kind;
            cell.audit_passed = res.audit.passed();
            cell.margin = res.certificate.margin;
            const auto& f = res.certificate.field;
            if (!f.empty() && !std::isnan(f.lambda.front())) cell.lambda = f.lambda.front();
            if (cell.verdict != VerdictKind::Certified) cell.note = res.certificate.verdict.to_string();
        } catch (const Error& e) {
            cell.verdict = VerdictKind::HypothesisFailed;
            cell.note = e.what();
        }
    };
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nq; ++j) {
            cells[i * nq + j].p = spec.p_values[i];
            cells[i * nq + j].q = spec.q_values[j];
        }
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t tasks = std::min(hw, n);
    std::vector<std::future<void>> futs;
    const std::size_t chunk = (n + tasks - 1) / tasks;
    for (std::size_t b = 0; b < n; b += chunk)
        futs.push_back(std::async(std::launch::async, [&, b] {
            for (std::size_t k = b; k < std::min(n, b + chunk); ++k) run_cell(cells[k]);
        }));
    for (auto& f : futs) f.get();
    return cells;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

void write_region_csv(std::ostream& os, const std::vector<SweepCell>& cells) {
    os << "p,q,verdict,audit,lambda,margin,note\n";
    for (const auto& c : cells) {
        os << num(c.p) << ',' << num(c.q) << ',' << to_string(c.verdict) << ',' << (c.audit_passed ? "pass" : "fail")
           << ',' << (c.lambda ? num(*c.lambda) : std::string()) << ',' << num(c.margin) << ','
           << csv_field(c.note) << '\n';
    }
}

void write_region_svg(std::ostream& os, const SweepSpec& spec, const std::vector<SweepCell>& cells) {
    const std::size_t np = spec.p_values.size();
    const std::size_t nq = spec.q_values.size();
    const int cw = 28, ch = 20, left = 60, top = 20, bottom = 50;
    const int width = left + static_cast<int>(np) * cw + 20;
    const int height = top + static_cast<int>(nq) * ch + bottom;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nq; ++j) {
            const auto& c = cells[i * nq + j];
            const char* fill = c.verdict == VerdictKind::Certified    ? "#2e7d32"
                               : c.verdict == VerdictKind::ViolatedAt ? "#c62828"
                                                                      : "#bdbdbd";
            const int x = left + static_cast<int>(i) * cw;
            const int y = top + static_cast<int>(nq - 1 - j) * ch;
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw - 1 << "\" height=\"" << ch - 1
               << "\" fill=\"" << fill << "\"><title>p=" << num(c.p) << " q=" << num(c.q) << " "
               << to_string(c.verdict) << "</title></rect>\n";
        }
    for (std::size_t i = 0; i < np; ++i)
        os << "<text x=\"" << left + static_cast<int>(i) * cw + cw / 2 << "\" y=\"" << top + static_cast<int>(nq) * ch + 14
           << "\" font-size=\"9\" text-anchor=\"middle\">" << num(spec.p_values[i]) << "</text>\n";
    for (std::size_t j = 0; j < nq; ++j)
        os << "<text x=\"" << left - 4 << "\" y=\"" << top + static_cast<int>(nq - 1 - j) * ch + ch / 2 + 3
           << "\" font-size=\"9\" text-anchor=\"end\">" << num(spec.q_values[j]) << "</text>\n";
    os << "<text x=\"" << left + static_cast<int>(np) * cw / 2 << "\" y=\"" << height - 8
       << "\" font-size=\"11\" text-anchor=\"middle\">p</text>\n";
    os << "<text x=\"12\" y=\"" << top + static_cast<int>(nq) * ch / 2 << "\" font-size=\"11\">q</text>\n";
    os << "</svg>\n";
}

}  // namespace tscale
