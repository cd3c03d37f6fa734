#include <doctest.h>

#include <cmath>

#include "tscale/error.hpp"
#include "tscale/simulate.hpp"

using namespace tscale;

namespace {

DelaySpec z_spec(std::vector<double> d = {1}) {
    return DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::integers()), std::move(d));
}

DelaySpec r_spec() { return DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::reals()), {1}); }

RhsSpec sum_rhs(double p, std::vector<Coefficient> q, double ell = 1.0) {
    RhsSpec r;
    r.p = Coefficient(p);
    r.q = std::move(q);
    r.ell = ell;
    r.declared_monotone = true;
    return r;
}

// x' = -2x + x(t-1), x = 1 on [-1, 0]: closed forms on [0, 1] and [1, 2]
double halanay_exact(double t) {
    if (t <= 1.0) return 0.5 + 0.5 * std::exp(-2.0 * t);
    const double s = t - 1.0, A = 0.25 + 0.5 * std::exp(-2.0);
    return A * std::exp(-2.0 * s) + 0.25 + 0.5 * s * std::exp(-2.0 * s);
}

RootField constant_field(double lambda, double t0) {
    RootField f;
    f.grid = {t0};
    f.lambda = {lambda};
    f.residual = {0.0};
    f.s_lower = {-1.0};
    f.jump = {false};
    f.errors = {""};
    return f;
}

}  // namespace

TEST_CASE("Euler steps on Z") {
    const auto tr = simulate(z_spec(), sum_rhs(0.5, {0.2, 0.1}), HistoryFunction::constant(1.0), 10);
    CHECK(tr.at(1) == doctest::Approx(0.8).epsilon(1e-15));
    // hand recurrence x(n+1) = x(n) + (-0.3 x(n) + 0.1 x(n-1))
    double prev = 1.0, cur = 1.0;
    for (int n = 0; n < 10; ++n) {
        const double next = cur - 0.3 * cur + 0.1 * prev;
        prev = cur;
        cur = next;
        CHECK(tr.at(n + 1) == doctest::Approx(cur).epsilon(1e-14));
    }
    CHECK(tr.at(-1) == 1.0);
}

TEST_CASE("zero right-hand side keeps the history constant") {
    for (const auto& spec : {z_spec(), r_spec()}) {
        const auto tr = simulate(spec, sum_rhs(0.0, {0.0, 0.0}), HistoryFunction::constant(3.25), 4);
        for (const auto& s : tr.samples) CHECK(s.x == 3.25);
    }
}

TEST_CASE("method of steps on the reals") {
    GridPolicy pol;
    pol.dense_step = 1e-3;
    const auto tr = simulate(r_spec(), sum_rhs(2.0, {0.0, 1.0}), HistoryFunction::constant(1.0), 2.0, pol);
    CHECK(std::abs(tr.at(1.0) - (0.5 + 0.5 * std::exp(-2.0))) < 1e-8);
    CHECK(std::abs(tr.at(1.0) - 0.567668) < 1e-6);
    for (double t : {0.3, 1.0, 1.45, 2.0}) CHECK(std::abs(tr.at(t) - halanay_exact(t)) < 1e-8);
}

TEST_CASE("RK4 refinement order with Hermite reads") {
    const double T = 3.0;
    double v[3];
    const double steps[3] = {0.02, 0.01, 0.005};
    for (int i = 0; i < 3; ++i) {
        GridPolicy pol;
        pol.dense_step = steps[i];
        v[i] = simulate(r_spec(), sum_rhs(2.0, {0.0, 1.0}), HistoryFunction::constant(1.0), T, pol).at(T);
    }
    const double d1 = std::abs(v[0] - v[1]), d2 = std::abs(v[1] - v[2]);
    CAPTURE(d1);
    CAPTURE(d2);
    CHECK(d1 / d2 > 12.0);  // 16 in the asymptotic regime
    CHECK(d1 < 50.0 * std::pow(steps[0], 4));
}

TEST_CASE("linear reads are available and less accurate") {
    GridPolicy pol;
    pol.dense_step = 1e-2;
    const auto herm = simulate(r_spec(), sum_rhs(2.0, {0.0, 1.0}), HistoryFunction::constant(1.0), 2.0, pol);
    const auto lin = simulate(r_spec(), sum_rhs(2.0, {0.0, 1.0}), HistoryFunction::constant(1.0), 2.0, pol,
                              Interp::LinearDense);
    CHECK(std::abs(herm.at(2.0) - halanay_exact(2.0)) < std::abs(lin.at(2.0) - halanay_exact(2.0)));
    CHECK(std::abs(lin.at(2.0) - halanay_exact(2.0)) < 1e-5);
}

TEST_CASE("determinism") {
    const TimeScale mixed({DenseInterval{0, 1}, ArithmeticGrid{1.5, 0.5, 0, std::nullopt}});
    const DelaySpec spec(builtin_shift(ShiftFamily::Translation, mixed, 1.5), {2});
    const auto a = simulate(spec, sum_rhs(0.8, {0.2, 0.3}), HistoryFunction::constant(1.0), 30);
    const auto b = simulate(spec, sum_rhs(0.8, {0.2, 0.3}), HistoryFunction::constant(1.0), 30);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].t == b.samples[i].t);
        CHECK(a.samples[i].x == b.samples[i].x);
    }
}

TEST_CASE("scattered recurrences reproduce e_lambda") {
    // y^D = lambda y: on Z with lambda = -0.37, on 2^Z with lambda(t) = -0.37 / t, so 1 + mu lambda = 0.63
    const auto z = simulate(z_spec(), sum_rhs(0.37, {0.0, 0.0}), HistoryFunction::constant(1.0), 60);
    for (int t = 0; t <= 60; ++t) CHECK(z.at(t) == doctest::Approx(std::pow(0.63, t)).epsilon(1e-12));

    const auto qs = DelaySpec(builtin_shift(ShiftFamily::Scaling, TimeScale::geometric(2.0)), {2});
    RhsSpec rhs = sum_rhs(0.0, {0.0, 0.0});
    rhs.p = Coefficient::callable([](double t) { return 0.37 / t; }, "0.37/t");
    const auto q = simulate(qs, rhs, HistoryFunction::constant(1.0), 1024);
    for (int n = 0; n <= 10; ++n) CHECK(q.at(std::ldexp(1.0, n)) == doctest::Approx(std::pow(0.63, n)).epsilon(1e-12));
}

TEST_CASE("positivity when p exceeds the sum of q") {
    const auto tr = simulate(z_spec({1, 3}), sum_rhs(0.6, {0.1, 0.2, 0.15}), HistoryFunction::constant(2.0), 300);
    for (const auto& s : tr.samples) CHECK(s.x > 0.0);
}

TEST_CASE("sup and max right-hand sides") {
    RhsSpec sup;
    sup.form = RhsForm::SupEq;
    sup.p = Coefficient(0.5);
    sup.q = {Coefficient(0.2)};
    const auto h = HistoryFunction::callable([](double t) { return 1.0 - 0.1 * t; }, "ramp");
    const auto tr = simulate(z_spec({2}), sup, h, 3);
    // sup of x over {-2, -1, 0} is x(-2) = 1.2
    CHECK(tr.at(1) == doctest::Approx(1.0 - 0.5 + 0.2 * 1.2).epsilon(1e-15));
    sup.form = RhsForm::MaxEq;
    const auto tm = simulate(z_spec({2}), sup, h, 3);
    // max over delayed values {x(0), x(-2)}
    CHECK(tm.at(1) == doctest::Approx(1.0 - 0.5 + 0.2 * 1.2).epsilon(1e-15));
}

TEST_CASE("simulation errors") {
    auto bad = [](const auto& fn, Errc want) {
        try {
            fn();
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == want);
        }
    };
    bad([] { simulate(z_spec(), sum_rhs(0.5, {0.2, 0.1}, 0.5), HistoryFunction::constant(-1.0), 5); },
        Errc::NegativeBaseFractionalPower);
    bad([] { simulate(z_spec(), sum_rhs(0.5, {0.2}), HistoryFunction::constant(1.0), 5); }, Errc::InvalidProblem);
    bad([] { simulate(z_spec({3}), sum_rhs(0.5, {0.2, 0.1}), HistoryFunction::table({-1, 0}, {1, 1}), 5); },
        Errc::HistoryGap);
    const auto tr = simulate(z_spec(), sum_rhs(0.5, {0.2, 0.1}), HistoryFunction::constant(1.0), 5);
    bad([&] { tr.at(6); }, Errc::OutOfDomain);
}

TEST_CASE("exponential candidates") {
    const double lambda = -0.178301;
    const auto z = simulate_exponential_candidate(TimeScale::integers(), constant_field(lambda, 0), 2.0, 50);
    for (int t = 0; t <= 50; ++t) CHECK(z.at(t) == doctest::Approx(2.0 * std::pow(1 + lambda, t)).epsilon(1e-12));

    const auto flat = simulate_exponential_candidate(TimeScale::integers(), constant_field(0.0, 0), 3.0, 20);
    for (const auto& s : flat.samples) CHECK(s.x == 3.0);

    const auto r = simulate_exponential_candidate(TimeScale::reals(), constant_field(-0.4428, 0), 2.0, 10);
    for (double t : {0.5, 3.0, 10.0}) CHECK(r.at(t) == doctest::Approx(2.0 * std::exp(-0.4428 * t)).epsilon(1e-10));

    auto gap = constant_field(-0.1, 0);
    gap.lambda[0] = std::nan("");
    gap.partial = true;
    CHECK_THROWS_AS(simulate_exponential_candidate(TimeScale::integers(), gap, 2.0, 5), Error);
}

TEST_CASE("comparison runs") {
    const auto f = sum_rhs(0.5, {0.2, 0.0});
    const auto ok = comparison_run(z_spec(), f, HistoryFunction::constant(0.9), HistoryFunction::constant(1.0), 200, 0.01);
    CHECK(ok.status == ComparisonStatus::Pass);

    const auto same = comparison_run(z_spec(), f, HistoryFunction::constant(1.0), HistoryFunction::constant(1.0), 200, 0.01);
    CHECK(same.status == ComparisonStatus::Rejected);

    const auto r = comparison_run(r_spec(), sum_rhs(2.0, {0.0, 1.0}), HistoryFunction::constant(0.9),
                                  HistoryFunction::constant(1.0), 50, 1e-3);
    CHECK(r.status == ComparisonStatus::Pass);
    CHECK_FALSE(r.first_violation.has_value());
}
