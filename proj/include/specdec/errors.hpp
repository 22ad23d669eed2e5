#pragma once

#include <stdexcept>
#include <string>

namespace specdec {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration or parameters (bad vocab size, empty corpus, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed training data (token id out of range, empty collection).
struct DataError : Error {
    using Error::Error;
};

// A token id that does not exist in the vocabulary it was used with.
struct InvalidTokenError : Error {
    using Error::Error;
};

// Malformed serialized input (vocabulary file, CSV, config file).
struct FormatError : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of a formula.
struct DomainError : Error {
    using Error::Error;
};

// Breach of an internal invariant; maps to exit code 3 in the CLI.
struct InternalError : Error {
    using Error::Error;
};

} // namespace specdec
