#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tscale/coefficient.hpp"
#include "tscale/exponential.hpp"
#include "tscale/shifts.hpp"

namespace tscale {

enum class HalanayForm { SumPower, SupForm, ProductForm, MaxForm };

std::string_view to_string(HalanayForm f) noexcept;

/// Coefficients of a Halanay-type inequality.
///   SumPower:    x^D <= -p x + sum_i q_i x^l(d_i)            q = {q_0..q_r}
///   SupForm:     x^D <= -p x + q sup_{[d_r, t]} x^l          q = {q}
///   MaxForm:     x^D <= -p x + q max_i x^l(d_i)              q = {q}
///   ProductForm: x^D <= -p x + prod_i beta_i x^{alpha_i}(d_i) q = {beta_0..beta_r}
/// where d_i = delta_-(h_i, t). The sup window of SupForm uses tau = h_r.
struct HalanayProblem {
    DelaySpec spec;
    HalanayForm form = HalanayForm::SumPower;
    Coefficient p;
    std::vector<Coefficient> q;
    double ell = 1.0;
    std::vector<double> alpha;
    double Kconst = 2.0;  // K of the SumPower polynomial, M of the sup/max one

    const TimeScale& ts() const { return spec.ts(); }
    double t0() const { return spec.t0(); }
    /// Throws InvalidProblem on structural errors (sizes, ranges).
    void validate() const;
};

/// sup of mu over [delta_-(h_r, t0), t].
double mu_tilde(const HalanayProblem& problem, double t);

/// S(t) = (-1/mu_tilde, 0); `floor` stands in for -inf when mu_tilde = 0.
std::pair<double, double> s_window(const HalanayProblem& problem, double t, double floor = -1e6);

/// P(t, .) for one fixed t, with all graininess profiles precomputed.
class CharacteristicFunction {
public:
    CharacteristicFunction(const HalanayProblem& problem, double t);

    double t() const { return t_; }
    double mu_tilde() const { return mu_tilde_; }

    /// P(t, k); OutsideS when 1 + mu_tilde k <= 0.
    double value(double k) const;
    /// P(t, k) divided by its largest exponential factor: same sign, no underflow.
    double scaled(double k) const;

private:
    struct Factor {
        double weight;
        std::size_t profile;
    };
    struct Term {
        double coef;
        std::vector<Factor> factors;
    };

    std::size_t profile(const TimeScale& ts, double a, double b);
    double log_factor(const std::vector<Factor>& fs, double k) const;
    void check_k(double k) const;
    double eval(double k, bool scale) const;

    double t_;
    double mu_tilde_;
    double p_;
    std::vector<ExpProfile> profiles_;
    std::vector<Factor> lead_;
    std::vector<Term> terms_;
};

double char_poly(const HalanayProblem& problem, double t, double k);

struct RootOptions {
    double tol = 1e-10;
    double dense_floor = -1e3;   // initial stand-in for -inf when mu_tilde = 0
    double deepen = 1e3;         // one retry at dense_floor * deepen
    int scan_points = 64;
    double report_floor = -1e6;  // s_lower reported when mu_tilde = 0
};

struct Root {
    double t = 0.0;
    double lambda = 0.0;
    double residual = 0.0;
    double s_lower = 0.0;
    double mu_tilde = 0.0;
};

/// max{k in S(t) : P(t, k) = 0}: first + to - sign change scanning down from 0,
/// refined by bisection.
Root largest_root(const HalanayProblem& problem, double t, const RootOptions& opt = {});

/// lambda sampled on a grid, read back piecewise constant from the left.
struct RootField {
    std::vector<double> grid;
    std::vector<double> lambda;    // NaN where the root failed
    std::vector<double> residual;
    std::vector<double> s_lower;
    std::vector<bool> jump;        // |lambda_j - lambda_{j-1}| > jump_threshold
    std::vector<std::string> errors;  // per point, empty when the root succeeded
    double tol = 1e-10;
    bool partial = false;

    bool empty() const { return grid.empty(); }
    /// lambda(grid[j]) for grid[j] <= t < grid[j+1]; the first value is used
    /// left of the grid. FieldGap at failed points.
    double lambda_at(double t) const;
    /// The common value when lambda is constant over the grid (within tol).
    std::optional<double> constant() const;
    /// log e_lambda(t, t0) for the piecewise-constant lambda; t0 = grid[0].
    double log_exp(const TimeScale& ts, double t) const;
    /// log e_lambda(t, t0) at every time of an increasing list.
    std::vector<double> log_exp_series(const TimeScale& ts, const std::vector<double>& times) const;
};

RootField root_field(const HalanayProblem& problem, const std::vector<double>& grid,
                     const RootOptions& opt = {}, double jump_threshold = 0.1);

}  // namespace tscale
