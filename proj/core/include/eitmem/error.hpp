#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eitmem {

/// Coarse failure classes. The CLI maps these onto exit codes.
enum class ErrorCategory {
    invalid_input,
    config,
    physics_validity,
    numerics,
    io,
};

std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error
{
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), m_category(category)
    {
    }

    ErrorCategory category() const noexcept { return m_category; }

private:
    ErrorCategory m_category;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what)
{
    throw Error(category, what);
}

inline void require(bool condition, ErrorCategory category, const std::string& what)
{
    if (!condition) {
        throw Error(category, what);
    }
}

} // namespace eitmem
