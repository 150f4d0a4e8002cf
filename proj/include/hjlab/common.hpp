#pragma once
#include <stdexcept>
#include <string>

namespace hjlab {

inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

inline void ensure_arg(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace hjlab
