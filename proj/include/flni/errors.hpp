#pragma once

#include <stdexcept>
#include <string>

namespace flni {

// Thrown when vector lengths do not match the graph they are indexed by.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace flni
