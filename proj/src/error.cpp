#include "rdtfg/error.hpp"

namespace rdtfg {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateLabels: return "DegenerateLabels";
    case ErrorKind::FeatureMismatch: return "FeatureMismatch";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::InsufficientGroups: return "InsufficientGroups";
    case ErrorKind::InsufficientProfiles: return "InsufficientProfiles";
    case ErrorKind::UnmappedFeature: return "UnmappedFeature";
    case ErrorKind::UnmappedCategory: return "UnmappedCategory";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ZeroPrecision: return "ZeroPrecision";
    case ErrorKind::DuplicateDimension: return "DuplicateDimension";
    case ErrorKind::MissingDimension: return "MissingDimension";
    case ErrorKind::NonMonotoneMonths: return "NonMonotoneMonths";
    case ErrorKind::InfeasibleTarget: return "InfeasibleTarget";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::RowInvalid: return "RowInvalid";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::AlreadyRecorded: return "AlreadyRecorded";
    case ErrorKind::Io: return "Io";
    case ErrorKind::ChainBroken: return "ChainBroken";
    case ErrorKind::LockHeld: return "LockHeld";
    }
    return "Unknown";
}

} // namespace rdtfg
