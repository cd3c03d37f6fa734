#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tscale/coefficient.hpp"
#include "tscale/halanay.hpp"
#include "tscale/shifts.hpp"

namespace tscale {

/// Initial function phi on [delta_-(h_r, t0), t0]_T.
class HistoryFunction {
public:
    enum class Kind { Constant, Tabulated, Callable };

    static HistoryFunction constant(double c);
    /// Piecewise linear through the rows; HistoryGap outside [t.front(), t.back()].
    static HistoryFunction table(std::vector<double> t, std::vector<double> v);
    static HistoryFunction callable(std::function<double(double)> fn, std::string label);

    double operator()(double t) const;
    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    std::optional<double> constant_value() const { return const_; }
    /// Table rows, when tabulated.
    const std::vector<std::pair<double, double>>& rows() const { return rows_; }

private:
    Kind kind_ = Kind::Constant;
    std::function<double(double)> fn_;
    std::optional<double> const_;
    std::string label_;
    std::vector<std::pair<double, double>> rows_;
};

/// How delayed values between stored dense samples are read back.
enum class Interp { HermiteDense, LinearDense, StepScattered };

struct TrajectorySample {
    double t = 0.0;
    double x = 0.0;
    double mu = 0.0;
    PointKind kind = PointKind::Scattered;
    double slope = 0.0;  // right derivative, for Hermite reads on dense stretches
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    Interp interp = Interp::HermiteDense;
    double t0 = 0.0;
    double dense_step = 0.0;
    std::string solver;

    /// x(t) for t inside the stored range.
    double at(double t) const;
    std::vector<double> times() const;
    std::vector<double> values() const;
};

enum class RhsForm { SumPowerEq, SupEq, MaxEq, ProductEq, Custom };

std::string_view to_string(RhsForm f) noexcept;

/// F(t, x) with x[0] = x(t) and x[i] = x(delta_-(h_i, t)).
using CustomRhs = std::function<double(double, std::span<const double>)>;

/// Right-hand side of x^D = -p x + F.
struct RhsSpec {
    RhsForm form = RhsForm::SumPowerEq;
    Coefficient p;
    /// SumPowerEq: q_0..q_r. SupEq/MaxEq: {q}. ProductEq: beta_0..beta_r.
    /// Custom: the declared bound |F| <= sum_i q_i |x_i|^ell.
    std::vector<Coefficient> q;
    double ell = 1.0;
    std::vector<double> alpha;
    CustomRhs custom;
    std::string custom_label;
    double offset = 0.0;            // added to F, e.g. -eps for a strict sub-solution
    bool declared_monotone = false;  // F nondecreasing in every delayed argument
    std::pair<double, double> state_range{-10.0, 10.0};  // where the declared bound is sampled

    static RhsSpec from_problem(const HalanayProblem& problem);
    /// The Halanay problem whose lambda certifies this RHS (Custom: SumPower with the declared q, ell).
    HalanayProblem dominating_problem(const DelaySpec& spec, double Kconst) const;
};

/// Method of steps: exact Euler steps at right-scattered points, RK4 on dense
/// stretches with delayed values interpolated from the stored trajectory.
Trajectory simulate(const DelaySpec& spec, const RhsSpec& rhs, const HistoryFunction& history,
                    double T_end, const GridPolicy& policy = {}, Interp interp = Interp::HermiteDense);

/// K e_lambda(t, t0) on [grid.front(), T_end] for the field's piecewise-constant lambda.
Trajectory simulate_exponential_candidate(const TimeScale& ts, const RootField& field, double K,
                                          double T_end, const GridPolicy& policy = {});

enum class ComparisonStatus { Pass, Violated, Rejected };

struct ComparisonReport {
    ComparisonStatus status = ComparisonStatus::Pass;
    std::optional<double> first_violation;
    std::string message;
    Trajectory lower;  // phi run, RHS shifted down by eps
    Trajectory upper;  // psi run
};

/// Runs phi with F - eps and psi with F; reports the first t > t0 where phi(t) >= psi(t).
ComparisonReport comparison_run(const DelaySpec& spec, const RhsSpec& f_super,
                                const HistoryFunction& phi, const HistoryFunction& psi, double T_end,
                                double eps, const GridPolicy& policy = {});

}  // namespace tscale
