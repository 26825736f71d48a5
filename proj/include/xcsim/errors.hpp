#pragma once

#include <stdexcept>
#include <string>

namespace xcsim {

// Base type for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file content. Messages name the offending line where one exists.
class ParseError : public Error {
    using Error::Error;
};

// Input violates a documented constraint (duplicate key, cycle, bad config,
// out-of-order trace, ...).
class ValidationError : public Error {
    using Error::Error;
};

// An operation was called outside its contract (empty candidate list,
// resolve from a non-redirector, ...).
class UsageError : public Error {
    using Error::Error;
};

// A logical file name does not resolve in the catalog.
class UnknownFileError : public Error {
    using Error::Error;
};

// Filesystem-level failure: cannot open, read, write, or rename.
class IoError : public Error {
    using Error::Error;
};

}  // namespace xcsim
