#pragma once

#include <stdexcept>
#include <string>

namespace discdrift {

// Precondition violated on a numeric or structural parameter.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Unknown catalog name or similar lookup miss.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Experiment configuration rejected; carries the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace discdrift
