#pragma once

#include <stdexcept>
#include <string>

namespace bubblescope {

// Error categories map onto the CLI exit codes: invalid_argument -> 1,
// io_error -> 2, numeric_error -> 3.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bubblescope
