#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "tscale/certify.hpp"

namespace tscale::config {

using json = nlohmann::json;

/// Parses a file; ConfigError("", ...) when it cannot be read or is not JSON.
json load(const std::filesystem::path& path);

/// {"preset": "R"|"Z"|"hZ"|"qZ"|"qN"|"sqrtN", "h": .., "q": ..} or
/// {"label": .., "segments": [{"kind": "dense", "a": .., "b": ..}, {"kind": "arith", ...},
///  {"kind": "geom", ...}, {"kind": "sqrtN", ...}, {"kind": "points", "values": [..]}]}.
/// Bounds accept "inf" / "-inf"; integer bounds accept null for open.
TimeScale parse_scale(const json& j, const std::string& ptr = "");

/// number | {"power": [c, e]} | {"table": [[t, v], ..]} | {"csv": "file"}.
Coefficient parse_coefficient(const json& j, const std::string& ptr, const std::filesystem::path& base = {});

/// {"family": "translation"|"scaling"|"sqrt", "t0": ..} or
/// {"family": "custom", "t0": .., "minus": "<family>:<minus|plus>", "plus": "...",
///  "t_star_lower": .., "exclude_zero": bool}.
ShiftSystem parse_shift(const json& j, const TimeScale& ts, const std::string& ptr = "");

struct ProblemDoc {
    HalanayProblem problem;
    GridPolicy policy;
    RootOptions root;
};

/// {"scale": {...}?, "shift": {...}, "delays": [..], "form": "sum"|"sup"|"max"|"product",
///  "p": coef, "q": [coef..], "ell": .., "alpha": [..], "K": .., "solver": {"dense_step": .., "tol": ..}}.
/// `scale` overrides an embedded "scale".
ProblemDoc parse_problem(const json& j, const std::optional<TimeScale>& scale, const std::filesystem::path& base = {},
                         const std::string& ptr = "");

/// "const:V" or "csv:FILE".
HistoryFunction parse_history(const std::string& spec, const std::filesystem::path& base = {});

/// Axis: [v, ..] or {"from": a, "to": b, "step": s}.
std::vector<double> parse_axis(const json& j, const std::string& ptr);

/// {"problem": {...}, "p": axis, "q": axis, "q_index": .., "history": "const:1", "tend": .., "root_step": ..}.
SweepSpec parse_sweep(const json& j, const std::filesystem::path& base = {});

}  // namespace tscale::config
