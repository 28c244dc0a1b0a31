#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dualmark {

/// Malformed or unsupported file contents. `offset` is the byte position
/// where parsing stopped.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
          detail_(what),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t offset_;
};

/// The chaotic orbit collapsed (hit 0 or stalled on a fixed point).
class DegenerateKeyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Correlation requested for an image with zero variance.
class UndefinedCorrelationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace dualmark
