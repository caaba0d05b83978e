#include "eitmem/error.hpp"

namespace eitmem {

std::string_view to_string(ErrorCategory category)
{
    switch (category) {
    case ErrorCategory::invalid_input: return "invalid_input";
    case ErrorCategory::config: return "config";
    case ErrorCategory::physics_validity: return "physics_validity";
    case ErrorCategory::numerics: return "numerics";
    case ErrorCategory::io: return "io";
    }
    return "unknown";
}

} // namespace eitmem
