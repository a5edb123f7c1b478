#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tanfam {

enum class ErrorKind {
    InvalidConfig,
    SingularValue,
    BranchUndefined,
    NoConvergence,
    DerivativeSingular,
    OutsideDomain,
    NotInC0,
    NotInCn,
    ContinuationLost,
    WrongOrder,
    ParityUnsupported,
    SingularValueHit,
    AlphabetOverflow,
    LeftCantorRegion,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::SingularValue: return "SingularValue";
    case ErrorKind::BranchUndefined: return "BranchUndefined";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DerivativeSingular: return "DerivativeSingular";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::NotInC0: return "NotInC0";
    case ErrorKind::NotInCn: return "NotInCn";
    case ErrorKind::ContinuationLost: return "ContinuationLost";
    case ErrorKind::WrongOrder: return "WrongOrder";
    case ErrorKind::ParityUnsupported: return "ParityUnsupported";
    case ErrorKind::SingularValueHit: return "SingularValueHit";
    case ErrorKind::AlphabetOverflow: return "AlphabetOverflow";
    case ErrorKind::LeftCantorRegion: return "LeftCantorRegion";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace tanfam
