#pragma once

#include <stdexcept>
#include <string>

namespace qclock {

// Guard violations raised by the library. Each one maps to a specific
// precondition documented on the operation that throws it.

struct PulseUnresolvable : std::runtime_error {
    explicit PulseUnresolvable(const std::string& what) : std::runtime_error(what) {}
};

struct PulseTooWide : std::runtime_error {
    explicit PulseTooWide(const std::string& what) : std::runtime_error(what) {}
};

struct NotHermitian : std::runtime_error {
    explicit NotHermitian(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergent : std::runtime_error {
    explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

struct WindowGridMisaligned : std::runtime_error {
    explicit WindowGridMisaligned(const std::string& what) : std::runtime_error(what) {}
};

struct TooLarge : std::runtime_error {
    explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientRecords : std::runtime_error {
    explicit InsufficientRecords(const std::string& what) : std::runtime_error(what) {}
};

struct StationaryState : std::runtime_error {
    explicit StationaryState(const std::string& what) : std::runtime_error(what) {}
};

// Configuration file problems; `field` names the offending entry.
struct ConfigError : std::runtime_error {
    ConfigError(std::string field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field(std::move(field_path)) {}
    std::string field;
};

}  // namespace qclock
