#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace globact {

// Resource limits for the exhaustive computations.  All values are
// configurable from the CLI; the defaults are sized for rings of at
// most ~64 elements at n = 3.
struct Caps {
    std::size_t closure_max = 2'000'000;   // max elements materialized by closure()
    std::size_t ring_soft_cap = 64;        // warn before closures over larger rings
    std::size_t homotopy_max_steps = 1'000'000;  // BFS states in homotopy search
    std::size_t homotopy_window_factor = 3;      // max window = factor * input window
    std::size_t pi1_loop_window = 5;       // seed loop window length for pi1 search
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct CapExceeded : std::runtime_error {
    CapExceeded(const std::string& what, std::size_t reached)
        : std::runtime_error(what + " (count reached: " + std::to_string(reached) + ")"),
          count_reached(reached) {}
    std::size_t count_reached;
};

}  // namespace globact
