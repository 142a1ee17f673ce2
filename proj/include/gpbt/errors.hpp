#pragma once

#include <stdexcept>
#include <string>

namespace gpbt {

// Invalid experiment or scheduler configuration. Messages carry the
// offending field path so the CLI can print actionable diagnostics.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A result report arrived out of order (non-monotone step for an agent).
class SequencingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed checkpoint blob or unreadable artifact file.
class SerializationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem failures, reported with the path involved.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gpbt
