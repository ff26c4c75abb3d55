#pragma once

#include <stdexcept>

namespace tsch {

// Bad user input: malformed configuration files, out-of-range options.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// API misuse or an impossible request on otherwise valid data.
struct DomainError : std::logic_error {
    using std::logic_error::logic_error;
};

// File I/O failures and binary-format violations.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite loss encountered while training.
struct TrainingDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tsch
