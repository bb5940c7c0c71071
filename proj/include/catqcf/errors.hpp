#pragma once

#include <stdexcept>
#include <string>

namespace catqcf {

/// Invalid user configuration (bad N, unknown key, malformed JSON, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical invariant was violated at runtime, e.g. a Wigner function
/// with a non-negligible imaginary part. Usually signals a convention bug.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace catqcf
