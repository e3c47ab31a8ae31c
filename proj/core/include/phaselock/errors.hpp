#pragma once

#include <stdexcept>

namespace phaselock {

/// Invalid parameters, malformed configuration or input files. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation left its validity domain (norm blow-up, empty overlap,
/// failed self-check, ...). CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace phaselock
