#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tscale {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Segment kinds. A time scale is an ordered, pairwise disjoint union of these.
// ---------------------------------------------------------------------------

/// Closed interval [a, b]; a may be -inf (first segment only), b may be +inf.
struct DenseInterval {
    double a = 0.0;
    double b = kInf;
};

/// Points origin + n*step for n in [first, last]; either bound may be open.
struct ArithmeticGrid {
    double origin = 0.0;
    double step = 1.0;
    std::optional<std::int64_t> first = 0;
    std::optional<std::int64_t> last;
};

/// Points q^n for n in [nmin, nmax]. An open nmin adds the cluster point 0.
struct GeometricGrid {
    double q = 2.0;
    std::optional<std::int64_t> nmin = 0;
    std::optional<std::int64_t> nmax;
};

/// Points sqrt(n) for n in [nmin, nmax].
struct SqrtGrid {
    std::int64_t nmin = 0;
    std::optional<std::int64_t> nmax;
};

/// Finite strictly increasing list of isolated points.
struct ExplicitPoints {
    std::vector<double> values;
};

using Segment = std::variant<DenseInterval, ArithmeticGrid, GeometricGrid, SqrtGrid, ExplicitPoints>;

struct GridPolicy {
    double dense_step = 1e-3;       // sampling / quadrature step on dense segments
    double membership_rtol = 1e-12;

    void validate() const;
};

enum class PointKind { Scattered, DenseSample };

struct PointSample {
    double t;
    PointKind kind;
};

/// Dense measure plus the multiset of graininess values of the right-scattered
/// points of a half-open window [s, t).
struct GrainProfile {
    double dense_length = 0.0;
    std::vector<std::pair<double, std::int64_t>> grains;  // (mu, multiplicity)

    double max_mu() const;
};

/// An immutable time scale: a closed subset of the reals, unbounded above,
/// given as a finite composition of segments.
class TimeScale {
public:
    explicit TimeScale(std::vector<Segment> segments, std::string label = {},
                       double t_star_lower = -kInf, double membership_rtol = 1e-12);

    static TimeScale reals(double from = -kInf);
    static TimeScale integers();
    static TimeScale h_integers(double h);
    /// q^Z plus the cluster point 0 when `nmin` is open; q^{n >= nmin} otherwise.
    static TimeScale geometric(double q, std::optional<std::int64_t> nmin = std::nullopt);
    static TimeScale sqrt_naturals();

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const std::string& label() const noexcept { return label_; }
    double t_star_lower() const noexcept { return t_star_lower_; }
    double membership_rtol() const noexcept { return rtol_; }
    double lower() const;

    bool contains(double t) const { return snap(t).has_value(); }
    /// The member nearest to `t` if within tolerance.
    std::optional<double> snap(double t) const;
    /// Like snap() but throws NotInTimeScale.
    double member(double t) const;

    double sigma(double t) const;
    double rho(double t) const;
    double mu(double t) const { const double x = member(t); return sigma(x) - x; }
    bool right_scattered(double t) const { const double x = member(t); return sigma(x) > x; }
    bool left_scattered(double t) const { const double x = member(t); return rho(x) < x; }

    /// sup of mu over [window_start, t] intersected with the scale.
    double mu_tilde(double t, double window_start) const;

    /// Scattered points exactly, dense stretches sampled at `policy.dense_step`.
    std::vector<PointSample> iterate_points(double s, double t, const GridPolicy& policy) const;

    /// Calls fn(r, mu(r)) for every right-scattered r in [s, t).
    void for_each_scattered(double s, double t, const std::function<void(double, double)>& fn) const;

    /// Dense length and scattered graininess histogram of [s, t).
    GrainProfile grain_profile(double s, double t) const;

    /// Dense sub-intervals [lo, hi] (lo < hi) of [s, t].
    std::vector<std::pair<double, double>> dense_pieces(double s, double t) const;

    /// The dense segment [a, b] with a <= t < b, if any.
    std::optional<std::pair<double, double>> dense_extent(double t) const;
    /// The dense segment [a, b] with a <= t <= b, if any.
    std::optional<std::pair<double, double>> containing_dense(double t) const;

private:
    struct Located {
        std::size_t segment;
        double value;
        std::optional<std::int64_t> index;  // grid index for grid segments
        bool cluster = false;               // the 0 of a geometric segment
    };

    std::optional<Located> locate(double t) const;
    Located locate_or_throw(double t) const;
    double segment_lower(std::size_t i) const;
    double segment_upper(std::size_t i) const;
    double tol_at(double t) const;

    std::vector<Segment> segments_;
    std::string label_;
    double t_star_lower_;
    double rtol_;
};

/// Delta integral of f over [s, t): exact sum mu(r) f(r) over right-scattered
/// points plus Simpson/Richardson quadrature on dense parts.
double delta_integral(const TimeScale& ts, const std::function<double(double)>& f, double s,
                      double t, const GridPolicy& policy = {});

/// Generalised form: `dense_f` is integrated over dense parts (split at
/// `breakpoints`), `scattered_term(r, mu)` supplies each scattered contribution.
double delta_integral_split(const TimeScale& ts, const std::function<double(double)>& dense_f,
                            const std::function<double(double, double)>& scattered_term, double s,
                            double t, const GridPolicy& policy = {},
                            std::span<const double> breakpoints = {});

double delta_derivative(const TimeScale& ts, const std::function<double(double)>& f, double t,
                        const GridPolicy& policy = {});

}  // namespace tscale
