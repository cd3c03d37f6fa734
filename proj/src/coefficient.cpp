#include "tscale/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "tscale/detail/digest.hpp"
#include "tscale/detail/format.hpp"
#include "tscale/error.hpp"

namespace tscale {

namespace {

std::string num(double v) { return detail::format_real(v); }
}  // namespace

Coefficient::Coefficient(double c) : const_(c), label_("const:" + num(c)) {
    if (!std::isfinite(c)) throw Error(Errc::InvalidProblem, "coefficient constant must be finite");
}

Coefficient Coefficient::power(double c, double e) {
    if (e == 0.0) return Coefficient(c);
    Coefficient out;
    out.const_.reset();
    out.fn_ = [c, e](double t) { return c * std::pow(t, e); };
    out.label_ = "power:" + num(c) + "*t^" + num(e);
    return out;
}

Coefficient Coefficient::table(std::vector<double> t, std::vector<double> v) {
    if (t.empty() || t.size() != v.size())
        throw Error(Errc::InvalidProblem, "coefficient table needs matching non-empty columns");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(v[i]))
            throw Error(Errc::InvalidProblem, "coefficient table entries must be finite");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw Error(Errc::InvalidProblem, "coefficient table times must increase");
    }
    Coefficient out;
    out.const_.reset();
    out.knots_ = t;
    std::string rows;
    for (std::size_t i = 0; i < t.size(); ++i) rows += num(t[i]) + "," + num(v[i]) + ";";
    auto tt = std::make_shared<const std::vector<double>>(std::move(t));
    auto vv = std::make_shared<const std::vector<double>>(std::move(v));
    out.fn_ = [tt, vv](double x) {
        const auto& ts = *tt;
        const auto& vs = *vv;
        if (x <= ts.front()) return vs.front();
        if (x >= ts.back()) return vs.back();
        const auto it = std::upper_bound(ts.begin(), ts.end(), x);
        const std::size_t j = static_cast<std::size_t>(it - ts.begin());
        const double w = (x - ts[j - 1]) / (ts[j] - ts[j - 1]);
        return vs[j - 1] + w * (vs[j] - vs[j - 1]);
    };
    out.label_ = "table:" + std::to_string(out.knots_.size()) + " rows#" + detail::hex64(detail::fnv1a(rows));
    return out;
}

Coefficient Coefficient::callable(std::function<double(double)> fn, std::string label) {
    if (!fn) throw Error(Errc::InvalidProblem, "empty coefficient callable");
    Coefficient out;
    out.const_.reset();
    out.fn_ = std::move(fn);
    out.label_ = std::move(label);
    return out;
}

}  // namespace tscale
