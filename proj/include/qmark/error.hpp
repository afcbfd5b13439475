#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmark {

/// Error kinds raised by the library. The enumerator names are the names
/// reported verbatim by the command line tool.
enum class ErrorKind {
    NotDyadic,
    DomainError,
    DepthError,
    PreconditionError,
    PrecisionError,
    LimitError,
    DegenerateInterval,
    GuardError,
    SearchCapError,
    SizeError,
    NoDecomposition,
    RationalInput,
    OutOfWindow,
    ParseError,
};

constexpr std::string_view error_name(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::NotDyadic: return "NotDyadic";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DepthError: return "DepthError";
    case ErrorKind::PreconditionError: return "PreconditionError";
    case ErrorKind::PrecisionError: return "PrecisionError";
    case ErrorKind::LimitError: return "LimitError";
    case ErrorKind::DegenerateInterval: return "DegenerateInterval";
    case ErrorKind::GuardError: return "GuardError";
    case ErrorKind::SearchCapError: return "SearchCapError";
    case ErrorKind::SizeError: return "SizeError";
    case ErrorKind::NoDecomposition: return "NoDecomposition";
    case ErrorKind::RationalInput: return "RationalInput";
    case ErrorKind::OutOfWindow: return "OutOfWindow";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace qmark
