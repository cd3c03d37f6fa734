#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "tscale/check.hpp"
#include "tscale/time_scale.hpp"

namespace tscale {

enum class ShiftFamily { Translation, Scaling, SqrtPythagorean, Custom };

std::string_view to_string(ShiftFamily f) noexcept;

/// (shift size s, point t) -> shifted point
using ShiftMap = std::function<double(double, double)>;

/// Backward/forward shift pair on T* with initial point t0.
struct ShiftSystem {
    TimeScale ts;
    double t0 = 0.0;
    ShiftMap minus;
    ShiftMap plus;
    ShiftFamily family = ShiftFamily::Custom;
    double t_star_lower = -kInf;  // T* lies in [t_star_lower, inf)
    bool exclude_zero = false;    // T* = T \ {0}

    bool in_t_star(double t) const;

    /// delta_-(s, t) snapped onto T*, or nullopt when (s, t) is outside D_-.
    std::optional<double> try_minus(double s, double t) const;
    std::optional<double> try_plus(double s, double t) const;

    /// Throwing variants (OutOfDomain).
    double delta_minus(double s, double t) const;
    double delta_plus(double s, double t) const;
};

/// Table shifts: Translation t -/+ s (t0 = 0), Scaling t/s, st (t0 = 1),
/// SqrtPythagorean sqrt(t^2 -/+ s^2) (t0 = 0). A non-default t0 generalises
/// each pair so that t0 stays the neutral shift size.
ShiftSystem builtin_shift(ShiftFamily family, const TimeScale& ts,
                          std::optional<double> t0 = std::nullopt);

ShiftSystem custom_shift(const TimeScale& ts, double t0, ShiftMap minus, ShiftMap plus,
                         double t_star_lower = -kInf, bool exclude_zero = false);

/// Shift system plus the delays h_0 = t0 < h_1 < ... < h_r.
class DelaySpec {
public:
    /// t0 is prepended when the list does not already start with it.
    DelaySpec(ShiftSystem shift, std::vector<double> delays);

    const ShiftSystem& shift() const noexcept { return shift_; }
    const TimeScale& ts() const noexcept { return shift_.ts; }
    double t0() const noexcept { return shift_.t0; }
    const std::vector<double>& delays() const noexcept { return delays_; }
    std::size_t r() const noexcept { return delays_.size() - 1; }

    /// delta_-(h_i, t) for t in [t0, inf)_T.
    double apply(std::size_t i, double t) const;
    /// delta_-(h_r, t0): left end of the history window. Throws InvalidDelaySpec
    /// when the largest delay cannot be applied at t0.
    double window_start() const;

private:
    ShiftSystem shift_;
    std::vector<double> delays_;
    std::optional<double> window_start_;
};

double delay_apply(const DelaySpec& spec, std::size_t i, double t);

/// Samples admissible tuples and checks P.1-P.5 and the derived shift
/// identities (i)-(x) to relative tolerance 1e-10.
CheckReport validate_shift_axioms(const ShiftSystem& shift, int samples = 1000,
                                  unsigned long long seed = 42);

/// Checks every delay of `spec` on `window` (a subset of [t0, inf)): domain,
/// onto-ness by round trip, structure preservation, sigma commutation and
/// monotonicity.
CheckReport validate_delay_function(const DelaySpec& spec, std::pair<double, double> window,
                                    int samples = 1000, unsigned long long seed = 42);

/// [t0, ~30 jumps or ~10 units forward], used when no window is given.
std::pair<double, double> default_delay_window(const ShiftSystem& shift);

}  // namespace tscale
