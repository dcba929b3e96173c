#pragma once

#include <stdexcept>
#include <string>

namespace graphzip {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// malformed input text (edge lists, matrices, stats files)
struct parse_error : error {
    using error::error;
};

// invalid parameters or contract violations at an API boundary
struct domain_error : error {
    using error::error;
};

// missing or inconsistent coder configuration (e.g. learned mode without stats)
struct config_error : error {
    using error::error;
};

// bitstream cannot be decoded (bad header, truncated or inconsistent payload)
struct decode_error : error {
    using error::error;
};

// iterative solver failed to converge
struct solver_error : error {
    using error::error;
};

} // namespace graphzip
