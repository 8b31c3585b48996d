#pragma once

#include <stdexcept>
#include <string>

namespace chitwist {

// Error taxonomy used across the library. Each condition named in a
// function contract maps to one of these types so callers can test for
// the exact failure mode.

struct NotInvertible : std::domain_error {
    using std::domain_error::domain_error;
};

struct ModuliNotCoprime : std::domain_error {
    using std::domain_error::domain_error;
};

struct UnsupportedModulus : std::domain_error {
    using std::domain_error::domain_error;
};

struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct PrimitivityRequired : std::domain_error {
    using std::domain_error::domain_error;
};

struct SizeLimit : std::length_error {
    using std::length_error::length_error;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationInsufficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateFunction : std::domain_error {
    using std::domain_error::domain_error;
};

struct NoStationaryPoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MultipleStationaryPoints : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RootNumberInconsistent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace chitwist
