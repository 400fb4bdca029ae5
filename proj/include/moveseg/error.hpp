#pragma once

#include <stdexcept>
#include <string>

namespace moveseg {

// Contract violation: bad argument, broken invariant, malformed config.
// The CLI maps this to exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem / format failure. The CLI maps this to exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace moveseg
