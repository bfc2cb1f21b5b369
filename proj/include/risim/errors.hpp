#pragma once

#include <stdexcept>
#include <string>

namespace risim {

/// Iterative computation ran out of budget; carries the best estimate so far.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double partial)
        : std::runtime_error(what), partial_(partial) {}

    double partial() const noexcept { return partial_; }

private:
    double partial_;
};

/// Requested order/size exceeds a configured cap.
class capacity_error : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace risim
