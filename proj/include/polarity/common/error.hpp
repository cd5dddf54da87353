#pragma once

#include <stdexcept>
#include <string>

namespace polarity {

// Broad failure classes; the CLI maps each to a distinct exit code.
enum class ErrorCategory { kConfig, kIo, kData, kNumeric };

inline const char* category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::kConfig: return "config";
        case ErrorCategory::kIo: return "io";
        case ErrorCategory::kData: return "data";
        case ErrorCategory::kNumeric: return "numeric";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

}  // namespace polarity
