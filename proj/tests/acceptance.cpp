// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tscale/certify.hpp"
#include "tscale/config.hpp"
#include "tscale/detail/rng.hpp"
#include "tscale/error.hpp"

using namespace tscale;

namespace {

constexpr double kBoundTol = 1e-9;
constexpr double kIdentityRtol = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (pass) detail = what;
        pass = false;
    }
};

int failures = 0;

void report(int n, const std::function<Outcome()>& body, double budget_s) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= budget_s) o.require(false, "runtime over " + std::to_string(budget_s) + " s");
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  %.3f s  %s\n", n, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.12g", v);
    return b;
}

double larger_quadratic_root(double a, double b, double c) { return (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a); }

// Bisection on a bracket where f(lo) < 0 < f(hi).
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (f(m) < 0.0 ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

HalanayProblem sum_problem(DelaySpec spec, Coefficient p, std::vector<Coefficient> q) {
    return {std::move(spec), HalanayForm::SumPower, std::move(p), std::move(q), 1.0, {}, 2.0};
}

HalanayProblem ex1() {
    return sum_problem(DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::integers()), {1}), 0.5,
                       {0.2, 0.1});
}

HalanayProblem classical() {
    return sum_problem(DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::reals()), {1}), 2.0, {0.0, 1.0});
}

HalanayProblem geometric_example() {
    return sum_problem(DelaySpec(builtin_shift(ShiftFamily::Scaling, TimeScale::geometric(2.0)), {2}), 0.6,
                       {0.0, 0.3});
}

TimeScale mixed_scale() {
    return TimeScale({DenseInterval{0, 1}, ArithmeticGrid{1.5, 0.5, 0, std::nullopt}}, "[0,1]u{1.5,2,...}");
}

void check_certificate(Outcome& o, const std::string& tag, const CertifyResult& r) {
    const auto& c = r.certificate;
    o.require(c.verdict.kind == VerdictKind::Certified, tag + ": " + c.verdict.to_string());
    o.require(c.margin >= -kBoundTol, tag + ": margin " + fmt(c.margin));
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    const auto r = largest_root(ex1(), 5);
    const double oracle = larger_quadratic_root(1, 1.3, 0.2);
    o.require(std::abs(r.lambda - oracle) < 1e-8, "lambda " + fmt(r.lambda) + " vs " + fmt(oracle));
    o.detail = o.pass ? "lambda=" + fmt(r.lambda) : o.detail;
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto r = largest_root(classical(), 5);
    const double oracle = bisect([](double k) { return k + 2 - std::exp(-k); }, -1, 0);
    o.require(std::abs(r.lambda - oracle) < 1e-6, "lambda " + fmt(r.lambda) + " vs " + fmt(oracle));
    o.detail = o.pass ? "lambda=" + fmt(r.lambda) : o.detail;
    return o;
}

Outcome criterion3() {
    Outcome o;
    const auto pr = geometric_example();
    const auto r = largest_root(pr, 2);
    const double oracle = larger_quadratic_root(1, 1.6, 0.3);
    o.require(std::abs(r.lambda - oracle) < 1e-8, "lambda(2) " + fmt(r.lambda) + " vs " + fmt(oracle));
    o.require(r.lambda > -0.5, "lambda(2) outside S(2)");
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n) {
        const double t = std::ldexp(1.0, n);
        const auto rt = largest_root(pr, t);
        worst = std::max(worst, std::abs(char_poly(pr, t, rt.lambda)));
    }
    o.require(worst < 1e-10, "max residual " + fmt(worst));
    if (o.pass) o.detail = "lambda(2)=" + fmt(r.lambda) + " max residual=" + fmt(worst);
    return o;
}

Outcome criterion4() {
    Outcome o;
    const auto phi = HistoryFunction::constant(1.0);
    CertifyOptions z;
    z.T_end = 200;
    const auto rz = certify(ex1(), phi, z);
    o.require(std::abs(rz.certificate.K0 - choose_K0(phi, ex1().spec)) == 0.0, "K0 mismatch");
    check_certificate(o, "Z", rz);

    CertifyOptions r;
    r.T_end = 50;
    r.policy.dense_step = 1e-3;
    check_certificate(o, "R", certify(classical(), phi, r));

    CertifyOptions q;
    q.T_end = std::ldexp(1.0, 200);
    check_certificate(o, "qN", certify(geometric_example(), phi, q));
    if (o.pass) o.detail = "Z, R and qN certified";
    return o;
}

Outcome criterion5() {
    Outcome o;
    detail::Rng rng(42);
    int certified = 0, total = 0;
    auto run = [&](const std::string& tag, const HalanayProblem& pr, double T_end, double step) {
        CertifyOptions opt;
        opt.T_end = T_end;
        opt.policy.dense_step = step;
        const auto h = HistoryFunction::constant(rng.uniform(0.5, 2.0));
        const auto res = certify(pr, h, opt);
        ++total;
        if (res.certificate.verdict.kind == VerdictKind::Certified && res.certificate.margin >= -kBoundTol)
            ++certified;
        else
            o.require(false, tag + " #" + std::to_string(total) + ": " + res.certificate.verdict.to_string());
    };
    // q_0..q_r with q_r > 0 and sum below p
    auto draw_q = [&](double p, std::size_t r) {
        std::vector<Coefficient> q;
        const double budget = p * rng.uniform(0.2, 0.9);
        std::vector<double> w(r + 1);
        double sum = 0.0;
        for (auto& x : w) sum += (x = rng.uniform(0.05, 1.0));
        for (double x : w) q.emplace_back(budget * x / sum);
        return q;
    };

    for (int i = 0; i < 5; ++i) {
        const std::size_t r = 1 + rng.index(2);
        std::vector<double> d;
        for (std::size_t j = 0; j < r; ++j) d.push_back((d.empty() ? 0 : d.back()) + 1 + static_cast<double>(rng.index(3)));
        const double p = rng.uniform(0.2, 1.0);
        run("Z", sum_problem(DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::integers()), d), p,
                             draw_q(p, r)),
            200, 1e-3);
    }
    for (int i = 0; i < 5; ++i) {
        const std::size_t r = 1 + rng.index(2);
        std::vector<double> d;
        for (std::size_t j = 0; j < r; ++j) d.push_back((d.empty() ? 0 : d.back()) + 0.5 * (1 + static_cast<double>(rng.index(4))));
        const double p = rng.uniform(0.2, 2.0);
        run("hZ", sum_problem(DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::h_integers(0.5)), d), p,
                              draw_q(p, r)),
            100, 1e-3);
    }
    for (int i = 0; i < 5; ++i) {
        const std::size_t r = 1 + rng.index(2);
        std::vector<double> d;
        for (std::size_t j = 0; j < r; ++j) d.push_back(rng.uniform(0.2, 1.5));
        std::sort(d.begin(), d.end());
        const double p = rng.uniform(0.5, 3.0);
        run("R", sum_problem(DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::reals()), d), p,
                             draw_q(p, r)),
            20, 1e-3);
    }
    for (int i = 0; i < 5; ++i) {
        const double a = rng.uniform(0.3, 1.0), b = a * rng.uniform(0.1, 0.9);
        const auto p = Coefficient::callable([a](double t) { return a / t; }, "a/t");
        const auto q = Coefficient::callable([b](double t) { return b / t; }, "b/t");
        run("qN", sum_problem(DelaySpec(builtin_shift(ShiftFamily::Scaling, TimeScale::geometric(2.0)), {}), p, {q}),
            std::ldexp(1.0, 60), 1e-3);
    }
    for (int i = 0; i < 5; ++i) {
        const double p = rng.uniform(0.3, 1.5);
        if (i % 2 == 0) {
            run("mixed", sum_problem(DelaySpec(builtin_shift(ShiftFamily::Translation, mixed_scale()), {}), p,
                                     draw_q(p, 0)),
                60, 1e-3);
        } else {
            run("mixed", sum_problem(DelaySpec(builtin_shift(ShiftFamily::Translation, mixed_scale(), 1.5), {2}),
                                     std::min(p, 2.0), draw_q(std::min(p, 2.0), 1)),
                60, 1e-3);
        }
    }
    if (o.pass) o.detail = std::to_string(certified) + "/" + std::to_string(total) + " certified";
    return o;
}

Outcome criterion6() {
    Outcome o;
    detail::Rng rng(42);
    struct Case {
        TimeScale ts;
        double lo, hi, mu_max;  // sampling window and graininess bound on it
        bool geometric;
    };
    const std::vector<Case> cases{
        {TimeScale::integers(), -10, 30, 1.0, false},
        {TimeScale::h_integers(0.5), -5, 15, 0.5, false},
        {TimeScale::reals(), -3, 6, 0.0, false},
        {mixed_scale(), 0, 12, 0.5, false},
        {TimeScale::sqrt_naturals(), 0, 8, 1.0, false},
        {TimeScale::geometric(2.0), 0.125, 512, 0.0, true},
    };
    GridPolicy pol;
    pol.dense_step = 0.05;
    int identities = 0, bounds = 0;
    for (int n = 0; n < 500; ++n) {
        const Case& c = cases[static_cast<std::size_t>(n) % cases.size()];
        const auto pts = c.ts.iterate_points(*c.ts.snap(c.lo), *c.ts.snap(c.hi), pol);
        auto draw = [&] { return pts[rng.index(pts.size())].t; };

        // p with 1 + mu p > 0 on the window: scaled by 1/t on 2^Z
        const double amp = rng.uniform(-0.9, 2.0), freq = rng.uniform(0.0, 1.5);
        Coefficient p;
        if (c.geometric) {
            p = Coefficient::callable([amp](double t) { return amp / t; }, "c/t");
        } else {
            const double a = c.mu_max > 0.0 ? amp / c.mu_max * 0.95 : amp;
            const int kind = n % 3;
            if (kind == 0) p = Coefficient(a);
            else if (kind == 1) p = Coefficient::callable([a, freq](double t) { return a * (0.6 + 0.4 * std::cos(freq * t)); }, "osc");
            else p = Coefficient::table({c.lo, 0.5 * (c.lo + c.hi), c.hi}, {a, 0.3 * a, a});
        }
        std::array<double, 3> tri{draw(), draw(), draw()};
        const auto rep = check_exp_identities(c.ts, p, {tri}, pol);
        if (rep.all_passed()) ++identities;
        else
            for (const auto& ch : rep.checks)
                o.require(ch.passed, c.ts.label() + " " + ch.name + ": " + ch.witness);

        // nonnegative phi with -phi positively regressive
        const double s = std::min(tri[0], tri[1]), t = std::max(tri[0], tri[1]);
        const double mag = rng.uniform(0.0, 0.95);
        Coefficient phi = c.geometric ? Coefficient::callable([mag](double x) { return mag / x; }, "m/t")
                                      : Coefficient(c.mu_max > 0.0 ? mag / c.mu_max : 3.0 * mag);
        const auto b = exp_bounds_check(c.ts, phi, s, t, pol);
        if (b.all_passed()) ++bounds;
        else
            for (const auto& ch : b.checks) o.require(ch.passed, c.ts.label() + " " + ch.name + ": " + ch.witness);
    }
    // spot value against (1 + p)^n at the pinned tolerance
    const double e = exp_ts(TimeScale::integers(), Coefficient(0.5), 7, 2);
    o.require(std::abs(e / std::pow(1.5, 5) - 1.0) < kIdentityRtol, "e_0.5(7,2) on Z");
    if (o.pass) o.detail = std::to_string(identities) + "/500 identity cases, " + std::to_string(bounds) + "/500 bound cases";
    return o;
}

Outcome criterion7() {
    Outcome o;
    const std::vector<ShiftSystem> systems{
        builtin_shift(ShiftFamily::Translation, TimeScale::reals()),
        builtin_shift(ShiftFamily::Translation, TimeScale::integers()),
        builtin_shift(ShiftFamily::Translation, TimeScale::h_integers(0.5)),
        builtin_shift(ShiftFamily::Scaling, TimeScale::geometric(2.0)),
        builtin_shift(ShiftFamily::Scaling, TimeScale::reals()),
        builtin_shift(ShiftFamily::SqrtPythagorean, TimeScale::sqrt_naturals()),
    };
    for (const auto& sh : systems) {
        const auto rep = validate_shift_axioms(sh, 1000, 42);
        for (const auto& c : rep.checks) o.require(c.passed, sh.ts.label() + " " + c.name + ": " + c.witness);
    }
    const TimeScale tilde({DenseInterval{-kInf, 0.0}, DenseInterval{1.0, kInf}}, "(-inf,0]u[1,inf)");
    const DelaySpec spec(builtin_shift(ShiftFamily::Translation, tilde), {2});
    const auto rep = validate_delay_function(spec, {0, 10}, 1000, 42);
    const auto* st = rep.find("structure[h=2]");
    o.require(st && !st->passed, "two-piece scale passed structure preservation");
    o.require(st && st->witness.find("t=0") != std::string::npos && st->witness.find("right-dense") != std::string::npos,
              "witness does not cite the right-dense image of 0");
    if (o.pass) o.detail = "6 families pass; two-piece scale: " + st->witness;
    return o;
}

Outcome criterion8() {
    Outcome o;
    detail::Rng rng(42);
    int passed = 0;
    for (int n = 0; n < 100; ++n) {
        const std::size_t r = rng.index(3);
        std::vector<double> d;
        for (std::size_t j = 0; j < r; ++j) d.push_back((d.empty() ? 0 : d.back()) + 1 + static_cast<double>(rng.index(3)));
        const DelaySpec spec(builtin_shift(ShiftFamily::Translation, TimeScale::integers()), d);
        RhsSpec f;
        f.p = Coefficient(rng.uniform(0.1, 1.0));
        for (std::size_t j = 0; j <= r; ++j) f.q.emplace_back(rng.uniform(0.0, 0.5));
        f.declared_monotone = true;
        const double a = rng.uniform(0.1, 2.0), gap = rng.uniform(1e-3, 0.5);
        const auto phi = HistoryFunction::callable([a](double t) { return a + 0.05 * std::sin(t); }, "phi");
        const auto psi = HistoryFunction::callable([a, gap](double t) { return a + gap + 0.05 * std::sin(t); }, "psi");
        const auto rep = comparison_run(spec, f, phi, psi, 100, 1e-3);
        if (rep.status == ComparisonStatus::Pass) ++passed;
        else o.require(false, "instance " + std::to_string(n) + ": " + rep.message);
    }
    if (o.pass) o.detail = std::to_string(passed) + "/100 ordered";
    return o;
}

Outcome criterion9() {
    Outcome o;
    const auto pr = ex1();
    RhsSpec rhs;
    rhs.form = RhsForm::Custom;
    rhs.p = pr.p;
    rhs.q = pr.q;
    rhs.custom = [](double, std::span<const double> x) { return 0.2 * x[0] / (1 + x[0] * x[0]) + 0.1 * std::tanh(x[1]); };
    rhs.custom_label = "0.2 x/(1+x^2) + 0.1 tanh(y)";
    CertifyOptions opt;
    opt.T_end = 200;
    const auto res = certify(pr, HistoryFunction::constant(1.0), opt, &rhs);
    const auto* bound = res.audit.find("declared bound");
    o.require(bound && bound->passed, "declared bound spot check");
    check_certificate(o, "tanh", res);
    if (o.pass) o.detail = "certified, margin=" + fmt(res.certificate.margin);
    return o;
}

Outcome criterion10() {
    Outcome o;
    const auto spec = config::parse_sweep(config::load(TS_CONFIG_DIR "/sweep_z.json"), TS_CONFIG_DIR);
    const auto cells = sweep(spec);
    int certified = 0;
    for (const auto& c : cells) {
        if (c.verdict != VerdictKind::Certified) continue;
        ++certified;
        o.require(c.p - c.q > 0.0 && 1.0 - c.p >= 0.0, "certified cell p=" + fmt(c.p) + " q=" + fmt(c.q));
    }
    std::ostringstream a, b;
    write_region_csv(a, cells);
    write_region_csv(b, sweep(spec));
    o.require(a.str() == b.str(), "region CSV differs between runs");
    if (o.pass) o.detail = std::to_string(certified) + "/" + std::to_string(cells.size()) + " cells certified, CSV identical";
    return o;
}

}  // namespace

int main() {
    report(1, criterion1, 1.0);
    report(2, criterion2, 1.0);
    report(3, criterion3, 5.0);
    report(4, criterion4, 10.0);
    report(5, criterion5, 60.0);
    report(6, criterion6, 60.0);
    report(7, criterion7, 60.0);
    report(8, criterion8, 60.0);
    report(9, criterion9, 60.0);
    report(10, criterion10, 60.0);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
