#include <doctest.h>

#include <cmath>
#include <functional>

#include "tscale/error.hpp"
#include "tscale/halanay.hpp"

using namespace tscale;

namespace {

constexpr double kRootTol = 1e-10;

// Largest root of a scalar function on (lo, hi) by plain bisection after a fine scan from hi.
double bisect_oracle(const std::function<double(double)>& f, double lo, double hi) {
    const int n = 20000;
    double b = hi - (hi - lo) * 1e-9;
    for (int i = 1; i <= n; ++i) {
        double a = hi - (hi - lo) * i / n;
        if (f(a) < 0.0 && f(b) > 0.0) {
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                (f(m) > 0.0 ? b : a) = m;
            }
            return 0.5 * (a + b);
        }
        b = a;
    }
    return std::nan("");
}

double larger_quadratic_root(double a, double b, double c) { return (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a); }

HalanayProblem ex1(double K = 2.0) {
    return {DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::integers()), {1}), HalanayForm::SumPower,
            Coefficient(0.5), {Coefficient(0.2), Coefficient(0.1)}, 1.0, {}, K};
}

HalanayProblem classical(double K = 2.0) {
    return {DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::reals()), {1}), HalanayForm::SumPower,
            Coefficient(2.0), {Coefficient(0.0), Coefficient(1.0)}, 1.0, {}, K};
}

HalanayProblem geometric_example() {
    return {DelaySpec(builtin_shift(ShiftFamily::Scaling, TimeScale::geometric(2.0)), {2}), HalanayForm::SumPower,
            Coefficient(0.6), {Coefficient(0.0), Coefficient(0.3)}, 1.0, {}, 2.0};
}

}  // namespace

TEST_CASE("characteristic function examples") {
    const auto pr = ex1();
    for (double t : {1.0, 5.0, 40.0})
        for (double k = -0.95; k < 0.0; k += 0.05)
            CHECK(char_poly(pr, t, k) == doctest::Approx((k + 0.5) * (1 + k) - (0.2 * (1 + k) + 0.1)).epsilon(1e-13));

    // P(t, 0) = p - K^(l-1) sum q
    auto sub = ex1(3.0);
    sub.ell = 0.5;
    CHECK(char_poly(sub, 4, 0.0) == doctest::Approx(0.5 - std::pow(3.0, -0.5) * 0.3).epsilon(1e-14));
    CHECK(char_poly(ex1(), 4, 0.0) == doctest::Approx(0.2).epsilon(1e-14));

    const double k = -0.4;
    const double P = char_poly(classical(), 3.0, k);
    CHECK(P == doctest::Approx((k + 2) * std::exp(k) - 1.0).epsilon(1e-10));
    CHECK(P * std::exp(-k) == doctest::Approx(k + 2 - std::exp(-k)).epsilon(1e-10));
    CHECK(std::abs(P * std::exp(-k) - 0.1082) < 1e-4);

    try {
        char_poly(ex1(), 3, -1.0);
        FAIL("expected OutsideS");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::OutsideS);
    }
}

TEST_CASE("admissible window") {
    CHECK(s_window(ex1(), 7).first == -1.0);
    CHECK(s_window(classical(), 7).first == -1e6);
    CHECK(s_window(classical(), 7, -50).first == -50);
    CHECK(s_window(geometric_example(), 2).first == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(s_window(ex1(), 7).second == 0.0);
}

TEST_CASE("largest roots against oracles") {
    const auto z = largest_root(ex1(), 3);
    CHECK(std::abs(z.lambda - larger_quadratic_root(1, 1.3, 0.2)) < 1e-8);
    CHECK(z.residual <= kRootTol);

    const auto r = largest_root(classical(), 3);
    const double ro = bisect_oracle([](double k) { return k + 2 - std::exp(-k); }, -1, 0);
    CHECK(std::abs(r.lambda - ro) < 1e-6);
    CHECK(std::abs(r.lambda - (-0.4428)) < 1e-4);

    const auto g = largest_root(geometric_example(), 2);
    CHECK(std::abs(g.lambda - larger_quadratic_root(1, 1.6, 0.3)) < 1e-8);
    CHECK(g.lambda > -0.5);
}

TEST_CASE("classical characteristic equation on the reals") {
    HalanayProblem pr{DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::reals()), {1.0, 2.5}),
                      HalanayForm::SumPower, Coefficient(3.0),
                      {Coefficient(0.5), Coefficient(0.7), Coefficient(0.4)}, 1.0, {}, 2.0};
    const double o = bisect_oracle([](double k) { return k + 3 - 0.5 - 0.7 * std::exp(-k) - 0.4 * std::exp(-2.5 * k); },
                                   -50, 0);
    CHECK(std::abs(largest_root(pr, 10).lambda - o) < 1e-8);
}

TEST_CASE("sup and product forms on the reals") {
    HalanayProblem sup{DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::reals()), {1.0}),
                       HalanayForm::SupForm, Coefficient(3.0), {Coefficient(1.0)}, 1.0, {}, 2.0};
    const double so = bisect_oracle([](double k) { return k + 3 - 2.0 * std::exp(-k); }, -50, 0);
    CHECK(std::abs(largest_root(sup, 5).lambda - so) < 1e-8);

    HalanayProblem prod{DelaySpec(builtin_shift(ShiftFamily::Translation, TimeScale::reals()), {2.0}),
                        HalanayForm::ProductForm, Coefficient(1.5), {Coefficient(1.0), Coefficient(0.8)}, 1.0,
                        {0.5, 0.5}, 2.0};
    const double po = bisect_oracle([](double k) { return k + 1.5 - 0.8 * std::exp(-k); }, -50, 0);
    CHECK(std::abs(largest_root(prod, 5).lambda - po) < 1e-8);
}

TEST_CASE("root field") {
    const auto f = root_field(ex1(), {0, 1, 2, 5, 9});
    REQUIRE(f.constant().has_value());
    CHECK(std::abs(*f.constant() - larger_quadratic_root(1, 1.3, 0.2)) < 1e-8);
    CHECK_FALSE(f.partial);

    const auto g = root_field(geometric_example(), {2, 4, 8});
    REQUIRE(g.lambda.size() == 3);
    for (int j = 0; j < 3; ++j) {
        const double m = std::ldexp(1.0, j);  // mu(t / 2)
        CHECK(std::abs(g.lambda[j] - larger_quadratic_root(m, 1 + 0.6 * m, 0.3)) < 1e-8);
        CHECK(g.residual[j] < 1e-10);
    }
    CHECK(g.lambda[0] != g.lambda[1]);
    CHECK(g.lambda[1] != g.lambda[2]);
    CHECK(g.lambda_at(3.0) == g.lambda[0]);
    CHECK(g.lambda_at(4.0) == g.lambda[1]);

    CHECK(root_field(ex1(), {}).empty());
}

TEST_CASE("root properties") {
    for (const auto& pr : {ex1(), classical(), geometric_example()}) {
        for (double tt : {pr.t0(), 4.0}) {
            const auto root = largest_root(pr, tt);
            CHECK(root.lambda < 0.0);
            CHECK(1.0 + root.mu_tilde * root.lambda > 0.0);
            CHECK(std::abs(char_poly(pr, tt, root.lambda)) <= kRootTol);
            // no sign change between the root and 0
            for (int i = 1; i < 128; ++i) {
                const double k = root.lambda * (1.0 - i / 128.0) + 1e-9 * root.lambda;
                CHECK(char_poly(pr, tt, k) > 0.0);
            }
            CHECK(char_poly(pr, tt, 0.0) > 0.0);
        }
    }
    const auto w = s_window(ex1(), 2);
    CHECK(char_poly(ex1(), 2, w.first + kRootTol * std::abs(w.first)) < 0.0);
}

TEST_CASE("K has no effect when ell = 1") {
    CHECK(std::abs(largest_root(ex1(2.0), 3).lambda - largest_root(ex1(10.0), 3).lambda) < kRootTol);
    CHECK(std::abs(largest_root(classical(2.0), 3).lambda - largest_root(classical(10.0), 3).lambda) < kRootTol);
}

TEST_CASE("invalid problems are rejected") {
    auto pr = ex1();
    pr.ell = 1.5;
    CHECK_THROWS_AS(pr.validate(), Error);
    pr = ex1();
    pr.q.pop_back();
    CHECK_THROWS_AS(largest_root(pr, 3), Error);
}
