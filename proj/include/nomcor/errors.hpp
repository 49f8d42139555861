#pragma once

#include <stdexcept>
#include <string>

namespace nomcor {

// Error categories map onto CLI exit codes:
//   usage/parse -> 2, budget -> 3, degenerate -> 4
enum class ErrorKind { usage, parse, budget, degenerate };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    int exit_code() const noexcept {
        switch (kind_) {
        case ErrorKind::budget: return 3;
        case ErrorKind::degenerate: return 4;
        default: return 2;
        }
    }

private:
    ErrorKind kind_;
};

inline Error usage_error(const std::string& msg) { return Error(ErrorKind::usage, msg); }
inline Error parse_error(const std::string& msg) { return Error(ErrorKind::parse, msg); }
inline Error budget_error(const std::string& msg) { return Error(ErrorKind::budget, msg); }
inline Error degenerate_error(const std::string& msg) { return Error(ErrorKind::degenerate, msg); }

} // namespace nomcor
