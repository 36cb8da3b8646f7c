#pragma once

#include <stdexcept>
#include <string>

namespace cqc {

/// Invalid distribution, channel, protocol or budget parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base class for sample-cache read failures.
class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CacheFormatError : public CacheError {
public:
    using CacheError::CacheError;
};

class CacheVersionError : public CacheError {
public:
    using CacheError::CacheError;
};

class CacheTruncatedError : public CacheError {
public:
    using CacheError::CacheError;
};

/// Payload checksum or expected channel digest does not match the header.
class CacheIntegrityError : public CacheError {
public:
    using CacheError::CacheError;
};

class SingularSensitivityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ParameterError(what);
}

}  // namespace detail
}  // namespace cqc
