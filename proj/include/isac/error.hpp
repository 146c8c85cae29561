#pragma once

#include <stdexcept>
#include <string>

namespace isac {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shapes or sizes that cannot be combined (zero-size transforms, band/vector mismatches).
class DimensionError : public Error {
public:
    using Error::Error;
};

// Input violates an operation's precondition (e.g. non-Hermitian matrix handed to eigh).
class ContractError : public Error {
public:
    using Error::Error;
};

// Two construction paths that must agree did not.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Configuration problem; key() names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace isac
