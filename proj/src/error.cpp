#include "tscale/error.hpp"

namespace tscale {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidTimeScale: return "InvalidTimeScale";
        case Errc::NotInTimeScale: return "NotInTimeScale";
        case Errc::ClusterPoint: return "ClusterPoint";
        case Errc::EmptyWindow: return "EmptyWindow";
        case Errc::QuadratureFailure: return "QuadratureFailure";
        case Errc::IncompatibleFamily: return "IncompatibleFamily";
        case Errc::InvalidDelaySpec: return "InvalidDelaySpec";
        case Errc::OutOfDomain: return "OutOfDomain";
        case Errc::NotRegressive: return "NotRegressive";
        case Errc::NegativeOneplus: return "NegativeOneplus";
        case Errc::PreconditionViolated: return "PreconditionViolated";
        case Errc::OutsideS: return "OutsideS";
        case Errc::NoSignChange: return "NoSignChange";
        case Errc::NotBracketed: return "NotBracketed";
        case Errc::InvalidProblem: return "InvalidProblem";
        case Errc::NegativeBaseFractionalPower: return "NegativeBaseFractionalPower";
        case Errc::HistoryGap: return "HistoryGap";
        case Errc::FieldGap: return "FieldGap";
        case Errc::WindowMismatch: return "WindowMismatch";
        case Errc::NonpositiveTail: return "NonpositiveTail";
        case Errc::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace tscale
