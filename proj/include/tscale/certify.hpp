#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tscale/halanay.hpp"
#include "tscale/simulate.hpp"

namespace tscale {

struct ConditionResult {
    std::string name;
    bool passed = true;
    double worst = kInf;  // smallest margin seen; negative when violated
    std::optional<double> witness;
    std::size_t evaluated = 0;
};

struct AuditReport {
    std::vector<ConditionResult> conditions;

    bool passed() const;
    /// "name at t=..." for every failed condition.
    std::vector<std::string> failures() const;
    const ConditionResult* find(const std::string& name) const;
};

/// Hypotheses of the Halanay theorem matching problem.form, evaluated on `grid`:
/// "1-mu_tilde*p>=0" everywhere, plus
///   sum:     "q_i>=0", "q_r>0", "p-sum(q)>0"
///   sup/max: "q>0", "p-q>0"
///   product: "beta_i>0", "p-prod(beta)>0"
/// A Custom rhs adds "declared bound" (see audit_rhs_bound).
AuditReport audit_conditions(const HalanayProblem& problem, const std::vector<double>& grid,
                             const RhsSpec* rhs = nullptr, unsigned long long seed = 42);

/// Spot check |F(t, x)| <= sum_i q_i(t) |x_i|^ell on random states in rhs.state_range.
ConditionResult audit_rhs_bound(const RhsSpec& rhs, const DelaySpec& spec, const std::vector<double>& grid,
                                int states_per_time = 64, unsigned long long seed = 42);

/// (1 + eps_K) max(1, sup |phi|) over the history window.
double choose_K0(const HistoryFunction& history, const DelaySpec& spec, double eps_K = 0.01,
                 const GridPolicy& policy = {});

enum class VerdictKind { Certified, ViolatedAt, HypothesisFailed };

struct Verdict {
    VerdictKind kind = VerdictKind::Certified;
    std::optional<double> t;            // ViolatedAt
    std::vector<std::string> failures;  // HypothesisFailed

    std::string to_string() const;
};

struct Certificate {
    std::string problem_digest;
    RootField field;
    double K0 = 0.0;
    Verdict verdict;
    double margin = kInf;  // min over samples t >= t0 of K0 e_lambda(t, t0) - |x(t)|
    std::optional<double> margin_t;
    std::optional<double> decay_estimate;
    double horizon = 0.0;
    double tol_abs = 1e-9;
    std::vector<double> soft_violations;  // isolated dense-sample excursions beyond tol_abs
    std::vector<double> t, x, bound;      // t >= t0 samples
};

/// Checks |x(t)| <= K0 e_lambda(t, t0) + tol_abs at every sample t >= t0.
/// Violations at scattered points fail at once; on dense stretches they fail
/// only when 3 or more consecutive samples exceed the tolerance.
Certificate verify_bound(const TimeScale& ts, const Trajectory& traj, const RootField& field, double K0,
                         double tol_abs = 1e-9);

/// Least-squares slope of log x against t over the trailing fraction of [t0, T_end].
double decay_rate(const Trajectory& traj, double window_fraction = 0.5);

struct CertifyOptions {
    double T_end = 200.0;
    GridPolicy policy;
    RootOptions root;
    double root_step = 0.01;  // spacing of root-grid samples on dense stretches
    double eps_K = 0.01;
    double tol_abs = 1e-9;
    double decay_fraction = 0.5;
    unsigned long long seed = 42;
};

struct CertifyResult {
    Certificate certificate;
    AuditReport audit;
    Trajectory trajectory;
};

/// Root grid: scattered points of [t0, T_end] plus dense samples every root_step.
std::vector<double> root_grid(const TimeScale& ts, double t0, double T_end, double root_step);

/// Audit, roots, simulation of the equation (rhs, or the problem's own equation), bound check.
CertifyResult certify(const HalanayProblem& problem, const HistoryFunction& history, const CertifyOptions& opt,
                      const RhsSpec* rhs = nullptr);

std::string problem_digest(const HalanayProblem& problem);

// ---------------------------------------------------------------------------

struct SweepSpec {
    explicit SweepSpec(HalanayProblem p) : problem(std::move(p)) {}

    HalanayProblem problem;  // template
    HistoryFunction history = HistoryFunction::constant(1.0);
    CertifyOptions options;
    std::vector<double> p_values;
    std::vector<double> q_values;
    std::size_t q_index = 1;  // which q_i the q axis sets
};

struct SweepCell {
    double p = 0.0;
    double q = 0.0;
    VerdictKind verdict = VerdictKind::HypothesisFailed;
    bool audit_passed = false;
    std::optional<double> lambda;  // lambda(t0)
    double margin = 0.0;
    std::string note;
};

/// Every (p, q) cell, evaluated in parallel and returned in grid order (p major).
std::vector<SweepCell> sweep(const SweepSpec& spec);

void write_region_csv(std::ostream& os, const std::vector<SweepCell>& cells);
void write_region_svg(std::ostream& os, const SweepSpec& spec, const std::vector<SweepCell>& cells);

std::string_view to_string(VerdictKind v) noexcept;

}  // namespace tscale
