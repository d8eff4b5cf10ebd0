#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ramemit {

/// Broad failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
    size,
    format,
    code_violation,
    sync,
    truncation,
    integrity,
    config,
    domain,
    calibration,
    no_signal,
    estimation,
    capability,
    io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// A Manchester pair that is (0,0) or (1,1).
class CodeViolation : public Error {
public:
    explicit CodeViolation(std::size_t bit_index)
        : Error(ErrorKind::code_violation,
                "manchester code violation at bit " + std::to_string(bit_index)),
          bit_index_(bit_index) {}

    std::size_t bit_index() const noexcept { return bit_index_; }

private:
    std::size_t bit_index_;
};

}  // namespace ramemit
