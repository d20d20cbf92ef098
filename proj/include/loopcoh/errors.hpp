#pragma once

#include <stdexcept>
#include <string>

namespace loopcoh {

/// Malformed input document: space spec, class data, Steenrod table.
class schema_error : public std::runtime_error {
public:
    explicit schema_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An operation was requested outside the hypotheses that make it meaningful
/// (e.g. a loop-space series for a space whose orientation has nonzero square).
class hypothesis_error : public std::runtime_error {
public:
    explicit hypothesis_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Internal consistency failure: broken differential, mismatched
/// characteristics, inconsistent dimensions. Indicates a bug or corrupt data.
class invariant_error : public std::runtime_error {
public:
    explicit invariant_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace loopcoh
