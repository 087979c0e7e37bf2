#ifndef RDTFG_ERROR_HPP
#define RDTFG_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdtfg {

enum class ErrorKind {
    InvalidArgument,
    DegenerateLabels,
    FeatureMismatch,
    ZeroVariance,
    InsufficientGroups,
    InsufficientProfiles,
    UnmappedFeature,
    UnmappedCategory,
    EmptyInput,
    LengthMismatch,
    ZeroPrecision,
    DuplicateDimension,
    MissingDimension,
    NonMonotoneMonths,
    InfeasibleTarget,
    SchemaMismatch,
    RowInvalid,
    ConfigInvalid,
    AlreadyRecorded,
    Io,
    ChainBroken,
    LockHeld,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure the library reports. The kind is stable
/// and machine-readable; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) {
        throw Error(kind, message);
    }
}

} // namespace rdtfg

#endif
