#pragma once

#include <stdexcept>
#include <string>

namespace codetopics {

// Base class for all library errors. The CLI maps these to exit code 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (CSV/TSV/JSON). Messages name the offending line.
struct ParseError : Error {
    using Error::Error;
};

// No usable data rows / all patients dropped.
struct EmptyCorpusError : Error {
    using Error::Error;
};

// Precondition violated by a caller-supplied value.
struct ValidationError : Error {
    using Error::Error;
};

// Enumeration-size guard tripped (instance too large for the exact oracle).
struct GuardError : Error {
    using Error::Error;
};

// Query code not present in the model vocabulary.
struct UnknownCodeError : Error {
    using Error::Error;
};

// Model lacks the sufficient statistics a computation needs.
struct MissingStatisticsError : Error {
    using Error::Error;
};

// Sampler state failed an internal consistency check.
struct InternalError : Error {
    using Error::Error;
};

// Filesystem / stream failure.
struct IoError : Error {
    using Error::Error;
};

} // namespace codetopics
