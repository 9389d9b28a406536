#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rhythmo {

// Exit code contract: 0 success, 2 usage, 3 data error, 4 internal.
enum class ExitCode : int { ok = 0, usage = 2, data = 3, internal = 4 };

class Error : public std::runtime_error {
public:
    Error(std::string code, ExitCode exit_code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), exit_code_(exit_code) {}

    const std::string& code() const { return code_; }
    ExitCode exit_code() const { return exit_code_; }

private:
    std::string code_;
    ExitCode exit_code_;
};

inline Error data_error(std::string code, const std::string& message) {
    return Error(std::move(code), ExitCode::data, message);
}

inline Error usage_error(std::string code, const std::string& message) {
    return Error(std::move(code), ExitCode::usage, message);
}

inline Error internal_error(std::string code, const std::string& message) {
    return Error(std::move(code), ExitCode::internal, message);
}

} // namespace rhythmo
