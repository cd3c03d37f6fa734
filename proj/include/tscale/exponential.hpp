#pragma once

#include <array>
#include <vector>

#include "tscale/check.hpp"
#include "tscale/coefficient.hpp"
#include "tscale/time_scale.hpp"

namespace tscale {

/// 1 + mu p within this distance of zero counts as non-regressive.
inline constexpr double kRegressTol = 1e-14;

/// log e_p(t, s), the Delta integral of the cylinder transform of p. t < s
/// gives -log e_p(s, t).
double log_exp_ts(const TimeScale& ts, const Coefficient& p, double t, double s,
                  const GridPolicy& policy = {});

/// e_p(t, s)
double exp_ts(const TimeScale& ts, const Coefficient& p, double t, double s,
              const GridPolicy& policy = {});

/// log e_{(-)p}(t, s), with (-)p = -p / (1 + mu p).
double log_exp_ominus_ts(const TimeScale& ts, const Coefficient& p, double t, double s,
                         const GridPolicy& policy = {});

/// (-)p(t) = -p(t) / (1 + mu(t) p(t))
double ominus(const Coefficient& p, const TimeScale& ts, double t);

/// 1 + mu(r) p(r) > 0 at every right-scattered r in [s, t).
bool positively_regressive(const TimeScale& ts, const Coefficient& p, double s, double t);

/// Graininess profile of a window, reused to evaluate e_k for many constant k.
struct ExpProfile {
    GrainProfile grains;
    double sign = 1.0;  // -1 when t < s

    static ExpProfile between(const TimeScale& ts, double t, double s);
    /// log e_k(t, s) for constant k.
    double log_e(double k) const;
};

/// Semigroup, reciprocal, (-)p and sigma-step identities of e_p on each
/// (t, s, r) triple, relative tolerance 1e-9.
CheckReport check_exp_identities(const TimeScale& ts, const Coefficient& p,
                                 const std::vector<std::array<double, 3>>& triples,
                                 const GridPolicy& policy = {});

/// For phi >= 0 on [s, t]:
///   1 - I <= e_{-phi}(t,s) <= exp(-I),   1 + I <= e_phi(t,s) <= exp(I),
/// with I the Delta integral of phi, plus 0 < e_{-phi}(t,s).
/// Throws PreconditionViolated unless -phi is positively regressive.
CheckReport exp_bounds_check(const TimeScale& ts, const Coefficient& phi, double s, double t,
                             const GridPolicy& policy = {});

}  // namespace tscale
