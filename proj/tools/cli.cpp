#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "tscale/config.hpp"
#include "tscale/csv.hpp"
#include "tscale/detail/digest.hpp"
#include "tscale/detail/format.hpp"
#include "tscale/error.hpp"
#include "tscale/exponential.hpp"
#include "tscale/version.hpp"

namespace tscale::cli {

namespace {

namespace fs = std::filesystem;
using config::json;

std::string num(double v) { return detail::format_real(v); }

// Output file, or the caller's stream when no path is given.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            os_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw ConfigError("", "cannot write " + path);
        os_ = file_.get();
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
};

fs::path dir_of(const std::string& file) { return fs::path(file).parent_path(); }

std::vector<double> parse_list(const std::string& s, const std::string& ptr) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ConfigError(ptr, "not a number: \"" + cell + "\"");
        }
    }
    if (out.empty()) throw ConfigError(ptr, "empty list");
    return out;
}

struct Digest {
    std::string text;
    void add(const std::string& k, const std::string& v) { text += k + "=" + v + "\n"; }
    void add_doc(const std::string& k, const json& j) { add(k, j.dump()); }
    std::string hex() const { return detail::hex64(detail::fnv1a(text)); }
};

struct Common {
    unsigned long long seed = 42;
    std::string scale_file;
    std::string problem_file;
    std::string out;
};

std::optional<TimeScale> load_scale(const std::string& file, Digest& d) {
    if (file.empty()) return std::nullopt;
    const json j = config::load(file);
    d.add_doc("scale", j);
    return config::parse_scale(j);
}

config::ProblemDoc load_problem(const Common& c, Digest& d) {
    if (c.problem_file.empty()) throw ConfigError("", "--problem is required");
    const auto scale = load_scale(c.scale_file, d);
    const json j = config::load(c.problem_file);
    d.add_doc("problem", j);
    return config::parse_problem(j, scale, dir_of(c.problem_file));
}

// ---------------------------------------------------------------------------

Coefficient exp_coefficient(const std::string& arg, Digest& d) {
    if (arg.rfind("const:", 0) == 0) {
        d.add("p", arg);
        return Coefficient::constant(parse_list(arg.substr(6), "/p").at(0));
    }
    if (arg.rfind("table:", 0) == 0) {
        auto [t, v] = csv::read_table(arg.substr(6));
        d.add("p", arg);
        d.add("p_rows", std::to_string(t.size()));
        return Coefficient::table(std::move(t), std::move(v));
    }
    json pj;
    try {
        pj = json::parse(arg);
    } catch (const json::exception&) {
        throw ConfigError("/p", "expected const:V, table:FILE or a JSON coefficient, got " + arg);
    }
    d.add_doc("p", pj);
    return config::parse_coefficient(pj, "/p");
}

int cmd_exp(const Common& c, const std::string& p_arg, const std::string& t_arg, double s, std::ostream& out) {
    Digest d;
    d.add("cmd", "exp");
    const auto ts = load_scale(c.scale_file, d);
    if (!ts) throw ConfigError("", "--scale is required");
    const Coefficient p = exp_coefficient(p_arg, d);
    d.add("to", t_arg);
    d.add("from", num(s));
    const auto ts_list = parse_list(t_arg, "/to");
    Sink sink(c.out, out);
    csv::write_header(*sink, c.seed, d.hex());
    *sink << "item,from,to,value,status\n";
    for (double t : ts_list) {
        const double l = log_exp_ts(*ts, p, t, s);
        *sink << "e_p," << num(s) << ',' << num(t) << ',' << num(std::exp(l)) << ",ok\n";
        *sink << "log_e_p," << num(s) << ',' << num(t) << ',' << num(l) << ",ok\n";
        if (t < s) continue;
        try {
            const auto rep = exp_bounds_check(*ts, p, s, t);
            for (const auto& ch : rep.checks)
                *sink << "bound:" << ch.name << ',' << num(s) << ',' << num(t) << ',' << num(ch.worst) << ','
                      << (ch.passed ? "PASS" : "FAIL") << '\n';
        } catch (const Error&) {
            *sink << "bound," << num(s) << ',' << num(t) << ",nan,skipped\n";
        }
    }
    return 0;
}

int cmd_sim(const Common& c, const std::string& hist, double tend, std::optional<double> step,
            const std::string& interp, std::ostream& out) {
    Digest d;
    d.add("cmd", "sim");
    auto doc = load_problem(c, d);
    if (step) doc.policy.dense_step = *step;
    d.add("history", hist);
    d.add("tend", num(tend));
    d.add("step", num(doc.policy.dense_step));
    d.add("interp", interp);
    const auto h = config::parse_history(hist, dir_of(c.problem_file));
    const Interp mode = interp == "linear" ? Interp::LinearDense : Interp::HermiteDense;
    const auto tr = simulate(doc.problem.spec, RhsSpec::from_problem(doc.problem), h, tend, doc.policy, mode);
    Sink sink(c.out, out);
    csv::write_header(*sink, c.seed, d.hex(), {"solver " + tr.solver + " dense_step " + num(tr.dense_step)});
    *sink << "t,x,mu,kind\n";
    for (const auto& s : tr.samples)
        *sink << num(s.t) << ',' << num(s.x) << ',' << num(s.mu) << ','
              << (s.kind == PointKind::Scattered ? "scattered" : "dense") << '\n';
    return 0;
}

int cmd_root(const Common& c, const std::string& grid_arg, std::optional<double> tol, std::ostream& out,
             std::ostream& err) {
    Digest d;
    d.add("cmd", "root");
    auto doc = load_problem(c, d);
    if (tol) doc.root.tol = *tol;
    d.add("grid", grid_arg);
    d.add("tol", num(doc.root.tol));
    const auto grid = parse_list(grid_arg, "/grid");
    const auto field = root_field(doc.problem, grid, doc.root);
    Sink sink(c.out, out);
    csv::write_header(*sink, c.seed, d.hex());
    *sink << "t,lambda,residual,s_lower\n";
    for (std::size_t j = 0; j < field.grid.size(); ++j) {
        *sink << num(field.grid[j]) << ',' << num(field.lambda[j]) << ',' << num(field.residual[j]) << ','
              << num(field.s_lower[j]) << '\n';
        if (!field.errors[j].empty()) err << "t=" << num(field.grid[j]) << ": " << field.errors[j] << '\n';
    }
    return field.partial ? 1 : 0;
}

json certificate_json(const CertifyResult& r, unsigned long long seed, const std::string& digest) {
    const auto& c = r.certificate;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    auto fin = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json audit = json::array();
    for (const auto& a : r.audit.conditions)
        audit.push_back({{"name", a.name}, {"passed", a.passed}, {"worst_margin", fin(a.worst)},
                         {"witness", opt(a.witness)}, {"evaluated", a.evaluated}});
    double lmin = kInf, lmax = -kInf;
    for (double l : c.field.lambda)
        if (!std::isnan(l)) {
            lmin = std::min(lmin, l);
            lmax = std::max(lmax, l);
        }
    json out;
    out["ts"] = kVersion;
    out["seed"] = seed;
    out["config"] = digest;
    out["problem_digest"] = c.problem_digest;
    out["verdict"] = std::string(to_string(c.verdict.kind));
    out["verdict_detail"] = c.verdict.to_string();
    out["violated_at"] = opt(c.verdict.t);
    out["K0"] = c.K0;
    out["margin"] = fin(c.margin);
    out["margin_t"] = opt(c.margin_t);
    out["decay_estimate"] = opt(c.decay_estimate);
    out["horizon"] = c.horizon;
    out["tol_abs"] = c.tol_abs;
    out["soft_violations"] = c.soft_violations.size();
    out["lambda"] = {{"t0", c.field.empty() ? json(nullptr) : fin(c.field.lambda.front())},
                     {"min", fin(lmin)},
                     {"max", fin(lmax)},
                     {"constant", opt(c.field.constant())},
                     {"grid_points", c.field.grid.size()},
                     {"partial", c.field.partial}};
    out["audit"] = audit;
    return out;
}

int cmd_certify(const Common& c, const std::string& hist, double tend, std::optional<double> step,
                std::optional<double> root_step, const std::string& json_out, std::ostream& out) {
    Digest d;
    d.add("cmd", "certify");
    auto doc = load_problem(c, d);
    CertifyOptions opt;
    opt.T_end = tend;
    opt.policy = doc.policy;
    if (step) opt.policy.dense_step = *step;
    opt.root = doc.root;
    if (root_step) opt.root_step = *root_step;
    opt.seed = c.seed;
    d.add("history", hist);
    d.add("tend", num(tend));
    d.add("step", num(opt.policy.dense_step));
    d.add("root_step", num(opt.root_step));
    const auto h = config::parse_history(hist, dir_of(c.problem_file));
    const auto res = certify(doc.problem, h, opt);
    const std::string digest = d.hex();
    {
        Sink js(json_out, out);
        *js << certificate_json(res, c.seed, digest).dump(2) << '\n';
    }
    if (!c.out.empty()) {
        Sink sink(c.out, out);
        csv::write_header(*sink, c.seed, digest, {"verdict " + res.certificate.verdict.to_string()});
        *sink << "t,x,bound,margin\n";
        const auto& cert = res.certificate;
        for (std::size_t i = 0; i < cert.t.size(); ++i)
            *sink << num(cert.t[i]) << ',' << num(cert.x[i]) << ',' << num(cert.bound[i]) << ','
                  << num(cert.bound[i] - std::abs(cert.x[i])) << '\n';
    }
    return res.certificate.verdict.kind == VerdictKind::Certified ? 0 : 2;
}

int cmd_sweep(const Common& c, const std::string& grid_file, const std::string& svg, std::ostream& out) {
    if (grid_file.empty()) throw ConfigError("", "--grid is required");
    Digest d;
    d.add("cmd", "sweep");
    const json j = config::load(grid_file);
    d.add_doc("grid", j);
    SweepSpec spec = config::parse_sweep(j, dir_of(grid_file));
    spec.options.seed = c.seed;
    const auto cells = sweep(spec);
    const std::string digest = d.hex();
    {
        Sink sink(c.out, out);
        csv::write_header(*sink, c.seed, digest);
        write_region_csv(*sink, cells);
    }
    if (!svg.empty()) {
        Sink s(svg, out);
        *s << "<!-- ts " << kVersion << " seed " << c.seed << " config " << digest << " -->\n";
        write_region_svg(*s, spec, cells);
    }
    return 0;
}

int cmd_validate_shift(const Common& c, const std::string& shift_file, int samples, std::ostream& out,
                       std::ostream& err) {
    if (shift_file.empty()) throw ConfigError("", "--shift is required");
    Digest d;
    d.add("cmd", "validate-shift");
    auto ts = load_scale(c.scale_file, d);
    const json j = config::load(shift_file);
    d.add_doc("shift", j);
    d.add("samples", std::to_string(samples));
    if (!ts) {
        if (!j.contains("scale")) throw ConfigError("/scale", "no time scale given (embed one or pass --scale)");
        ts = config::parse_scale(j["scale"], "/scale");
    }
    const ShiftSystem shift = j.contains("shift") ? config::parse_shift(j["shift"], *ts, "/shift")
                                                  : config::parse_shift(j, *ts);
    CheckReport rep = validate_shift_axioms(shift, samples, c.seed);
    if (j.contains("delays")) {
        std::vector<double> delays;
        for (std::size_t i = 0; i < j["delays"].size(); ++i) {
            const auto& v = j["delays"][i];
            if (!v.is_number()) throw ConfigError("/delays/" + std::to_string(i), "expected a number");
            delays.push_back(v.get<double>());
        }
        const DelaySpec spec(shift, delays);
        auto window = default_delay_window(shift);
        if (j.contains("window")) {
            const auto& w = j["window"];
            if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
                throw ConfigError("/window", "expected [a, b]");
            window = {w[0].get<double>(), w[1].get<double>()};
        }
        const auto drep = validate_delay_function(spec, window, samples, c.seed);
        rep.checks.insert(rep.checks.end(), drep.checks.begin(), drep.checks.end());
    }
    Sink sink(c.out, out);
    csv::write_header(*sink, c.seed, d.hex());
    *sink << "check,passed,evaluated,worst,witness\n";
    for (const auto& ch : rep.checks) {
        std::string w = ch.witness;
        for (auto& x : w)
            if (x == '"') x = '\'';
        *sink << ch.name << ',' << (ch.passed ? "PASS" : "FAIL") << ',' << ch.evaluated << ',' << num(ch.worst)
              << ",\"" << w << "\"\n";
        if (!ch.passed) err << "FAIL " << ch.name << ": " << ch.witness << '\n';
    }
    return rep.all_passed() ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-scale calculus, Halanay roots and decay certificates", "ts"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common c;
    auto common = [&c](CLI::App* sub, bool problem) {
        sub->add_option("--seed", c.seed, "random seed (echoed in output headers)")->capture_default_str();
        sub->add_option("--scale", c.scale_file, "time scale JSON");
        if (problem) sub->add_option("--problem", c.problem_file, "problem JSON");
        sub->add_option("--out", c.out, "output CSV (default stdout)");
    };

    std::string p_arg = "const:0", t_arg;
    double s_arg = 0.0;
    auto* exp = app.add_subcommand("exp", "time-scale exponential e_p(t, s)");
    common(exp, false);
    exp->add_option("--p", p_arg, "const:V, table:FILE or a JSON coefficient")->capture_default_str();
    exp->add_option("--to,--t", t_arg, "t, or a comma-separated list")->required();
    exp->add_option("--from,--s", s_arg, "base point s")->required();

    std::string hist = "const:1.0", interp = "hermite";
    double tend = 0.0;
    std::optional<double> step, root_step, tol;
    auto* sim = app.add_subcommand("sim", "simulate the problem's delay equation");
    common(sim, true);
    sim->add_option("--history", hist, "const:V or csv:FILE")->capture_default_str();
    sim->add_option("--tend", tend, "final time")->required();
    sim->add_option("--step", step, "dense step");
    sim->add_option("--interp", interp, "delayed reads on dense stretches")
        ->check(CLI::IsMember({"hermite", "linear"}))
        ->capture_default_str();

    std::string grid_arg;
    auto* root = app.add_subcommand("root", "largest characteristic root lambda(t)");
    common(root, true);
    root->add_option("--grid", grid_arg, "comma-separated times")->required();
    root->add_option("--tol", tol, "root tolerance");

    std::string json_out;
    auto* cert = app.add_subcommand("certify", "audit, simulate and verify x(t) <= K0 e_lambda(t, t0)");
    common(cert, true);
    cert->add_option("--history", hist, "const:V or csv:FILE")->capture_default_str();
    cert->add_option("--tend", tend, "horizon")->required();
    cert->add_option("--step", step, "dense step");
    cert->add_option("--root-step", root_step, "root grid spacing on dense stretches");
    cert->add_option("--json", json_out, "certificate JSON file (default stdout)");

    std::string grid_file, svg;
    auto* sw = app.add_subcommand("sweep", "certify every cell of a (p, q) grid");
    sw->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sw->add_option("--grid", grid_file, "sweep JSON")->required();
    sw->add_option("--out", c.out, "region CSV (default stdout)");
    sw->add_option("--svg", svg, "heatmap SVG");

    std::string shift_file;
    int samples = 1000;
    auto* vs = app.add_subcommand("validate-shift", "check shift axioms and delay functions");
    common(vs, false);
    vs->add_option("--shift", shift_file, "shift JSON (family, t0, delays, window, scale)")->required();
    vs->add_option("--samples", samples, "sampled tuples")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? 0 : 1;
    }

    try {
        if (*exp) return cmd_exp(c, p_arg, t_arg, s_arg, out);
        if (*sim) return cmd_sim(c, hist, tend, step, interp, out);
        if (*root) return cmd_root(c, grid_arg, tol, out, err);
        if (*cert) return cmd_certify(c, hist, tend, step, root_step, json_out, out);
        if (*sw) return cmd_sweep(c, grid_file, svg, out);
        if (*vs) return cmd_validate_shift(c, shift_file, samples, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace tscale::cli
