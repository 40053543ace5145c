#pragma once

#include <stdexcept>
#include <string>

namespace catclust {

/// Malformed or inconsistent input data (ragged tables, unequal alignment
/// lengths, unreadable files). Argument contract violations throw
/// std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace catclust
