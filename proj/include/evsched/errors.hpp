#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace evsched {

// Base of all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- core-model --------------------------------------------------------------
struct TargetBelowCurrent : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// -- gateway -----------------------------------------------------------------
struct TransportError : Error { using Error::Error; };
struct ProtocolError : Error { using Error::Error; };
struct ModelRefusal : Error { using Error::Error; };
struct NoToolCall : Error { using Error::Error; };

struct SchemaViolation : Error {
    std::vector<std::string> fields;  // one entry per offending field
    SchemaViolation(const std::string& msg, std::vector<std::string> f)
        : Error(msg), fields(std::move(f)) {}
};

// -- agents ------------------------------------------------------------------
struct MissingKnowledge : Error { using Error::Error; };
struct OutOfSet : Error { using Error::Error; };
struct UnresolvableTime : Error { using Error::Error; };
struct WindowTooLong : Error { using Error::Error; };
struct MissingParameter : Error { using Error::Error; };

// -- solvers -----------------------------------------------------------------
struct NumericalFailure : Error { using Error::Error; };

// -- harness -----------------------------------------------------------------
struct InsufficientTemplates : Error { using Error::Error; };
struct EmptyCorpus : Error { using Error::Error; };

}  // namespace evsched
