#pragma once

#include <stdexcept>
#include <string>

namespace tracemark {

/// Root of every exception thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid combination of options or keys.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

} // namespace tracemark
