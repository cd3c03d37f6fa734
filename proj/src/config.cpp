#include "tscale/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "tscale/csv.hpp"
#include "tscale/error.hpp"

namespace tscale::config {

namespace {

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

double real(const json& j, const std::string& ptr) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ConfigError(ptr, "expected a number or \"inf\"/\"-inf\"");
}

double real_or(const json& obj, const std::string& key, double dflt, const std::string& ptr) {
    if (!obj.contains(key)) return dflt;
    return real(obj[key], at(ptr, key));
}

// Absent -> dflt, null -> open, number -> value.
std::optional<std::int64_t> index_or(const json& obj, const std::string& key, std::optional<std::int64_t> dflt,
                                     const std::string& ptr) {
    if (!obj.contains(key)) return dflt;
    const auto& v = obj[key];
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "inf")) return std::nullopt;
    if (!v.is_number_integer()) throw ConfigError(at(ptr, key), "expected an integer, null or \"inf\"");
    return v.get<std::int64_t>();
}

const json& require(const json& obj, const std::string& key, const std::string& ptr) {
    if (!obj.is_object()) throw ConfigError(ptr, "expected an object");
    if (!obj.contains(key)) throw ConfigError(at(ptr, key), "missing field");
    return obj[key];
}

std::string string_of(const json& j, const std::string& ptr) {
    if (!j.is_string()) throw ConfigError(ptr, "expected a string");
    return j.get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
    std::filesystem::path p(file);
    return p.is_absolute() || base.empty() ? p : base / p;
}

template <class F>
auto wrap(const std::string& ptr, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(ptr, e.what());
    }
}

Segment parse_segment(const json& j, const std::string& ptr) {
    const auto kind = string_of(require(j, "kind", ptr), at(ptr, "kind"));
    if (kind == "dense")
        return DenseInterval{real(require(j, "a", ptr), at(ptr, "a")), real_or(j, "b", kInf, ptr)};
    if (kind == "arith") {
        ArithmeticGrid g{real_or(j, j.contains("start") ? "start" : "origin", 0.0, ptr),
                         real(require(j, "step", ptr), at(ptr, "step")), index_or(j, "first", 0, ptr),
                         index_or(j, "last", std::nullopt, ptr)};
        if (j.contains("count")) {
            const auto n = index_or(j, "count", std::nullopt, ptr);
            if (n && (*n < 1 || !g.first)) throw ConfigError(at(ptr, "count"), "count needs a positive value and a finite first index");
            g.last = n ? std::optional<std::int64_t>(*g.first + *n - 1) : std::nullopt;
        }
        return g;
    }
    if (kind == "geom")
        return GeometricGrid{real(require(j, "q", ptr), at(ptr, "q")), index_or(j, "nmin", 0, ptr),
                             index_or(j, "nmax", std::nullopt, ptr)};
    if (kind == "sqrtN") {
        const auto nmin = index_or(j, "nmin", 0, ptr);
        if (!nmin) throw ConfigError(at(ptr, "nmin"), "sqrtN needs a finite nmin");
        return SqrtGrid{*nmin, index_or(j, "nmax", std::nullopt, ptr)};
    }
    if (kind == "points") {
        const auto& v = require(j, "values", ptr);
        if (!v.is_array()) throw ConfigError(at(ptr, "values"), "expected an array");
        ExplicitPoints pts;
        for (std::size_t i = 0; i < v.size(); ++i) pts.values.push_back(real(v[i], at(at(ptr, "values"), i)));
        return pts;
    }
    throw ConfigError(at(ptr, "kind"), "unknown segment kind \"" + kind + "\"");
}

ShiftMap pick_map(const std::string& ref, const TimeScale& ts, double t0, const std::string& ptr) {
    const auto colon = ref.find(':');
    if (colon == std::string::npos) throw ConfigError(ptr, "expected \"<family>:<minus|plus>\"");
    const auto fam = ref.substr(0, colon);
    const auto side = ref.substr(colon + 1);
    ShiftFamily f;
    if (fam == "translation") f = ShiftFamily::Translation;
    else if (fam == "scaling") f = ShiftFamily::Scaling;
    else if (fam == "sqrt") f = ShiftFamily::SqrtPythagorean;
    else throw ConfigError(ptr, "unknown shift family \"" + fam + "\"");
    const ShiftSystem s = wrap(ptr, [&] { return builtin_shift(f, ts, t0); });
    if (side == "minus") return s.minus;
    if (side == "plus") return s.plus;
    throw ConfigError(ptr, "side must be minus or plus");
}

}  // namespace

json load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("", path.string() + ": " + e.what());
    }
}

TimeScale parse_scale(const json& j, const std::string& ptr) {
    if (!j.is_object()) throw ConfigError(ptr, "expected an object");
    return wrap(ptr, [&]() -> TimeScale {
        if (j.contains("preset")) {
            const auto p = string_of(j["preset"], at(ptr, "preset"));
            if (p == "R") return TimeScale::reals(real_or(j, "from", -kInf, ptr));
            if (p == "Z") return TimeScale::integers();
            if (p == "hZ") return TimeScale::h_integers(real(require(j, "h", ptr), at(ptr, "h")));
            if (p == "qZ") return TimeScale::geometric(real(require(j, "q", ptr), at(ptr, "q")));
            if (p == "qN") return TimeScale::geometric(real(require(j, "q", ptr), at(ptr, "q")), 0);
            if (p == "sqrtN") return TimeScale::sqrt_naturals();
            throw ConfigError(at(ptr, "preset"), "unknown preset \"" + p + "\"");
        }
        const auto& segs = require(j, "segments", ptr);
        if (!segs.is_array() || segs.empty()) throw ConfigError(at(ptr, "segments"), "expected a non-empty array");
        std::vector<Segment> out;
        for (std::size_t i = 0; i < segs.size(); ++i) out.push_back(parse_segment(segs[i], at(at(ptr, "segments"), i)));
        const std::string label = j.contains("label") ? string_of(j["label"], at(ptr, "label")) : std::string();
        return TimeScale(std::move(out), label, real_or(j, "t_star_lower", -kInf, ptr),
                         real_or(j, "membership_rtol", 1e-12, ptr));
    });
}

Coefficient parse_coefficient(const json& j, const std::string& ptr, const std::filesystem::path& base) {
    return wrap(ptr, [&]() -> Coefficient {
        if (j.is_number()) return Coefficient(j.get<double>());
        if (!j.is_object()) throw ConfigError(ptr, "expected a number or a coefficient object");
        if (j.contains("const")) return Coefficient(real(j["const"], at(ptr, "const")));
        if (j.contains("power")) {
            const auto& v = j["power"];
            if (!v.is_array() || v.size() != 2) throw ConfigError(at(ptr, "power"), "expected [c, e]");
            return Coefficient::power(real(v[0], at(at(ptr, "power"), 0)), real(v[1], at(at(ptr, "power"), 1)));
        }
        if (j.contains("table")) {
            const auto& v = j["table"];
            const auto tp = at(ptr, "table");
            if (!v.is_array()) throw ConfigError(tp, "expected [[t, v], ...]");
            std::vector<double> t, x;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_array() || v[i].size() != 2) throw ConfigError(at(tp, i), "expected [t, v]");
                t.push_back(real(v[i][0], at(at(tp, i), 0)));
                x.push_back(real(v[i][1], at(at(tp, i), 1)));
            }
            return Coefficient::table(std::move(t), std::move(x));
        }
        if (j.contains("csv")) {
            auto [t, x] = wrap(at(ptr, "csv"), [&] {
                return csv::read_table(resolve(base, string_of(j["csv"], at(ptr, "csv"))));
            });
            return Coefficient::table(std::move(t), std::move(x));
        }
        throw ConfigError(ptr, "coefficient needs one of const, power, table, csv");
    });
}

ShiftSystem parse_shift(const json& j, const TimeScale& ts, const std::string& ptr) {
    const auto fam = string_of(require(j, "family", ptr), at(ptr, "family"));
    std::optional<double> t0;
    if (j.contains("t0")) t0 = real(j["t0"], at(ptr, "t0"));
    if (fam == "custom") {
        const double t = t0.value_or(0.0);
        ShiftMap m = pick_map(string_of(require(j, "minus", ptr), at(ptr, "minus")), ts, t, at(ptr, "minus"));
        ShiftMap p = pick_map(string_of(require(j, "plus", ptr), at(ptr, "plus")), ts, t, at(ptr, "plus"));
        const bool ez = j.contains("exclude_zero") && j["exclude_zero"].get<bool>();
        return wrap(ptr, [&] {
            return custom_shift(ts, t, std::move(m), std::move(p), real_or(j, "t_star_lower", -kInf, ptr), ez);
        });
    }
    ShiftFamily f;
    if (fam == "translation") f = ShiftFamily::Translation;
    else if (fam == "scaling") f = ShiftFamily::Scaling;
    else if (fam == "sqrt") f = ShiftFamily::SqrtPythagorean;
    else throw ConfigError(at(ptr, "family"), "unknown shift family \"" + fam + "\"");
    return wrap(at(ptr, "family"), [&] { return builtin_shift(f, ts, t0); });
}

ProblemDoc parse_problem(const json& j, const std::optional<TimeScale>& scale, const std::filesystem::path& base,
                         const std::string& ptr) {
    if (!j.is_object()) throw ConfigError(ptr, "expected an object");
    std::optional<TimeScale> ts = scale;
    if (!ts) {
        if (!j.contains("scale")) throw ConfigError(at(ptr, "scale"), "no time scale given (embed one or pass --scale)");
        ts = parse_scale(j["scale"], at(ptr, "scale"));
    }
    const json shift_doc = j.contains("shift") ? j["shift"] : json{{"family", "translation"}};
    ShiftSystem shift = parse_shift(shift_doc, *ts, at(ptr, "shift"));

    std::vector<double> delays;
    if (j.contains("delays")) {
        const auto& d = j["delays"];
        if (!d.is_array()) throw ConfigError(at(ptr, "delays"), "expected an array");
        for (std::size_t i = 0; i < d.size(); ++i) delays.push_back(real(d[i], at(at(ptr, "delays"), i)));
    }
    DelaySpec spec = wrap(at(ptr, "delays"), [&] { return DelaySpec(std::move(shift), delays); });

    HalanayForm form = HalanayForm::SumPower;
    if (j.contains("form")) {
        const auto f = string_of(j["form"], at(ptr, "form"));
        if (f == "sum") form = HalanayForm::SumPower;
        else if (f == "sup") form = HalanayForm::SupForm;
        else if (f == "max") form = HalanayForm::MaxForm;
        else if (f == "product") form = HalanayForm::ProductForm;
        else throw ConfigError(at(ptr, "form"), "unknown form \"" + f + "\"");
    }
    Coefficient p = parse_coefficient(require(j, "p", ptr), at(ptr, "p"), base);
    std::vector<Coefficient> q;
    const auto& qj = require(j, "q", ptr);
    if (qj.is_array()) {
        for (std::size_t i = 0; i < qj.size(); ++i) q.push_back(parse_coefficient(qj[i], at(at(ptr, "q"), i), base));
    } else {
        q.push_back(parse_coefficient(qj, at(ptr, "q"), base));
    }
    std::vector<double> alpha;
    if (j.contains("alpha")) {
        const auto& a = j["alpha"];
        if (!a.is_array()) throw ConfigError(at(ptr, "alpha"), "expected an array");
        for (std::size_t i = 0; i < a.size(); ++i) alpha.push_back(real(a[i], at(at(ptr, "alpha"), i)));
    }
    HalanayProblem pr{std::move(spec), form, std::move(p), std::move(q), real_or(j, "ell", 1.0, ptr),
                      std::move(alpha), real_or(j, "K", 2.0, ptr)};
    wrap(ptr, [&] { pr.validate(); return 0; });

    ProblemDoc doc{std::move(pr), {}, {}};
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        const auto sp = at(ptr, "solver");
        doc.policy.dense_step = real_or(s, "dense_step", doc.policy.dense_step, sp);
        doc.root.tol = real_or(s, "tol", doc.root.tol, sp);
        wrap(at(sp, "dense_step"), [&] { doc.policy.validate(); return 0; });
        if (!(doc.root.tol > 0.0)) throw ConfigError(at(sp, "tol"), "tol must be positive");
    }
    return doc;
}

HistoryFunction parse_history(const std::string& spec, const std::filesystem::path& base) {
    if (spec.rfind("const:", 0) == 0) {
        const auto v = spec.substr(6);
        try {
            std::size_t used = 0;
            const double c = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return HistoryFunction::constant(c);
        } catch (const std::exception&) {
            throw ConfigError("/history", "bad constant \"" + v + "\"");
        }
    }
    if (spec.rfind("csv:", 0) == 0) {
        auto [t, v] = wrap("/history", [&] { return csv::read_table(resolve(base, spec.substr(4))); });
        return wrap("/history", [&] { return HistoryFunction::table(std::move(t), std::move(v)); });
    }
    throw ConfigError("/history", "expected const:V or csv:FILE, got \"" + spec + "\"");
}

std::vector<double> parse_axis(const json& j, const std::string& ptr) {
    std::vector<double> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(real(j[i], at(ptr, i)));
        return out;
    }
    if (!j.is_object()) throw ConfigError(ptr, "expected an array or {from, to, step}");
    const double a = real(require(j, "from", ptr), at(ptr, "from"));
    const double b = real(require(j, "to", ptr), at(ptr, "to"));
    const double s = real(require(j, "step", ptr), at(ptr, "step"));
    if (!(s > 0.0) || !(b >= a) || !std::isfinite(b)) throw ConfigError(ptr, "need from <= to and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / s + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        // Round to 12 significant digits so 0.3 + 5*0.05 reads back as 0.55.
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", a + static_cast<double>(i) * s);
        out.push_back(std::stod(buf));
    }
    return out;
}

SweepSpec parse_sweep(const json& j, const std::filesystem::path& base) {
    if (!j.is_object()) throw ConfigError("", "expected an object");
    ProblemDoc doc = parse_problem(require(j, "problem", ""), std::nullopt, base, "/problem");
    SweepSpec s(doc.problem);
    s.options.policy = doc.policy;
    s.options.root = doc.root;
    s.p_values = parse_axis(require(j, "p", ""), "/p");
    s.q_values = parse_axis(require(j, "q", ""), "/q");
    s.q_index = doc.problem.q.size() - 1;
    if (j.contains("q_index")) {
        if (!j["q_index"].is_number_unsigned()) throw ConfigError("/q_index", "expected a non-negative integer");
        s.q_index = j["q_index"].get<std::size_t>();
        if (s.q_index >= doc.problem.q.size()) throw ConfigError("/q_index", "no such q coefficient");
    }
    if (j.contains("history")) s.history = parse_history(string_of(j["history"], "/history"), base);
    s.options.T_end = real_or(j, "tend", 200.0, "");
    s.options.root_step = real_or(j, "root_step", s.options.root_step, "");
    return s;
}

}  // namespace tscale::config
