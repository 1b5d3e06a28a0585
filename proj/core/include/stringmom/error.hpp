#pragma once

#include <stdexcept>
#include <string>

namespace stringmom {

// Failure categories surface as distinct CLI exit codes (config 2, data 3,
// numeric 4). Precondition violations on library calls use
// std::invalid_argument.

class ConfigError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

} // namespace stringmom
