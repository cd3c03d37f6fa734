#include <doctest.h>

#include <cmath>

#include "tscale/detail/rng.hpp"
#include "tscale/error.hpp"
#include "tscale/exponential.hpp"

using namespace tscale;

namespace {

constexpr double kIdentityTol = 1e-9;

}  // namespace

TEST_CASE("exponential examples") {
    const auto z = TimeScale::integers();
    const auto r = TimeScale::reals();
    const auto q = TimeScale::geometric(2.0);
    for (const TimeScale* ts : {&z, &r, &q}) CHECK(exp_ts(*ts, Coefficient(0.0), 4, 1) == 1.0);
    CHECK(exp_ts(r, Coefficient(2.0), 1, 0) == doctest::Approx(std::exp(2.0)).epsilon(1e-10));
    CHECK(exp_ts(q, Coefficient(1.0), 4, 1) == doctest::Approx((1 + 1.0 * 1) * (1 + 1.0 * 2)).epsilon(1e-14));
    CHECK(exp_ts(z, Coefficient(0.7), 3, 3) == 1.0);
}

TEST_CASE("exponential rejects non-regressive and negative 1 + mu p") {
    const auto z = TimeScale::integers();
    try {
        exp_ts(z, Coefficient(-1.0), 5, 0);
        FAIL("expected NotRegressive");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotRegressive);
    }
    try {
        exp_ts(z, Coefficient(-3.0), 5, 0);
        FAIL("expected NegativeOneplus");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NegativeOneplus);
    }
}

TEST_CASE("ominus examples") {
    CHECK(ominus(Coefficient(3.0), TimeScale::reals(), 2.0) == -3.0);
    CHECK(ominus(Coefficient(0.5), TimeScale::integers(), 4.0) == doctest::Approx(-0.5 / 1.5).epsilon(1e-15));
    CHECK(ominus(Coefficient(0.0), TimeScale::geometric(2.0), 4.0) == 0.0);
}

TEST_CASE("identity reports") {
    const auto z = TimeScale::integers();
    const auto rep = check_exp_identities(z, Coefficient(0.5), {{{5, 3, 0}}});
    CHECK(rep.all_passed());
    CHECK(rep.find("(v) semigroup")->worst < 1e-12);
    CHECK(std::pow(1.5, 5) == doctest::Approx(exp_ts(z, Coefficient(0.5), 5, 0)).epsilon(1e-14));

    CHECK(check_exp_identities(TimeScale::reals(), Coefficient(1.3), {{{2, 2, 2}}}).all_passed());

    const auto q = TimeScale::geometric(2.0);
    const auto inv = Coefficient::callable([](double t) { return 1.0 / t; }, "1/t");
    const auto rq = check_exp_identities(q, inv, {{{8, 2, 1}}, {{16, 4, 0.5}}});
    CHECK(rq.all_passed());
    // 1 + mu(t)/t = q exactly, so e_p(2^n, 1) = 2^n
    for (int n = 1; n < 12; ++n) CHECK(exp_ts(q, inv, std::ldexp(1.0, n), 1) == doctest::Approx(std::ldexp(1.0, n)).epsilon(1e-13));
}

TEST_CASE("bounds check examples") {
    const auto z = TimeScale::integers();
    const auto zero = exp_bounds_check(z, Coefficient(0.0), 0, 4);
    CHECK(zero.all_passed());
    for (const auto& c : zero.checks)
        if (c.name != "0 < e_{-phi}") CHECK(c.worst == doctest::Approx(0.0));

    const auto half = exp_bounds_check(z, Coefficient(0.5), 0, 4);
    CHECK(half.all_passed());
    // 1 - 2 <= 0.5^4 <= e^-2
    CHECK(half.find("1-I <= e_{-phi}")->worst == doctest::Approx(0.0625 - (1 - 2.0)).epsilon(1e-12));
    CHECK(half.find("e_{-phi} <= exp(-I)")->worst == doctest::Approx(std::exp(-2.0) - 0.0625).epsilon(1e-12));

    const auto one = exp_bounds_check(TimeScale::reals(), Coefficient(1.0), 0, 1);
    CHECK(one.all_passed());
    CHECK(one.find("e_{-phi} <= exp(-I)")->worst == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

    try {
        exp_bounds_check(z, Coefficient(1.0), 0, 4);
        FAIL("expected PreconditionViolated");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PreconditionViolated);
    }
}

TEST_CASE("exponential properties") {
    const auto z = TimeScale::integers();
    detail::Rng rng(3);
    for (int n = 0; n < 50; ++n) {
        const double p = rng.uniform(-0.9, 2.0);
        const int s = static_cast<int>(rng.uniform(-20, 20)), t = s + static_cast<int>(rng.uniform(0, 30));
        CHECK(exp_ts(z, Coefficient(p), t, s) == doctest::Approx(std::pow(1 + p, t - s)).epsilon(1e-12));
        CHECK(exp_ts(z, Coefficient(p), t, s) * exp_ts(z, Coefficient(p), s, t) == doctest::Approx(1.0).epsilon(kIdentityTol));
        CHECK(exp_ts(z, Coefficient(p), t, s) > 0.0);
    }

    const TimeScale mixed({DenseInterval{0, 1}, ArithmeticGrid{1.5, 0.5, 0, std::nullopt}});
    for (double k : {-0.9, -0.5, -0.1}) {
        double prev = 1.0;
        for (double t : {0.25, 0.5, 1.0, 1.5, 2.0, 3.5, 6.0}) {
            const double e = exp_ts(mixed, Coefficient(k), t, 0);
            CHECK(e < prev);
            prev = e;
        }
    }
    // increasing in k on the regressive window
    for (const TimeScale* ts : {&z, &mixed}) {
        double prev = 0.0;
        for (double k = -0.95; k < 1.0; k += 0.05) {
            const double e = exp_ts(*ts, Coefficient(k), 7.0, 0.0);
            CHECK(e > prev);
            prev = e;
        }
    }
}

TEST_CASE("ExpProfile matches exp_ts for constant k") {
    const TimeScale mixed({DenseInterval{0, 1}, ArithmeticGrid{1.5, 0.5, 0, std::nullopt}});
    const auto prof = ExpProfile::between(mixed, 6.0, 0.5);
    for (double k : {-0.7, -0.2, 0.4})
        CHECK(prof.log_e(k) == doctest::Approx(log_exp_ts(mixed, Coefficient(k), 6.0, 0.5)).epsilon(1e-12));
}
