#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace priceflow {

enum class ErrorKind {
    SignViolation,
    MissingZero,
    BadGrid,
    ZeroMassPair,
    NonpositiveTime,
    BracketFailure,
    DomainTooSmall,
    Instability,
    DegenerateMasses,
    NotZeroMass,
    ZeroDatum,
    InsufficientPoints,
    ParseError,
    UnknownKey,
    ValidationError,
    InvalidArgument,
    IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SignViolation: return "SignViolation";
        case ErrorKind::MissingZero: return "MissingZero";
        case ErrorKind::BadGrid: return "BadGrid";
        case ErrorKind::ZeroMassPair: return "ZeroMassPairError";
        case ErrorKind::NonpositiveTime: return "NonpositiveTime";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::DomainTooSmall: return "DomainTooSmall";
        case ErrorKind::Instability: return "Instability";
        case ErrorKind::DegenerateMasses: return "DegenerateMasses";
        case ErrorKind::NotZeroMass: return "NotZeroMass";
        case ErrorKind::ZeroDatum: return "ZeroDatum";
        case ErrorKind::InsufficientPoints: return "InsufficientPoints";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnknownKey: return "UnknownKey";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace priceflow
