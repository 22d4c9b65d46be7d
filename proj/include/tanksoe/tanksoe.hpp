#ifndef TANKSOE_TANKSOE_HPP
#define TANKSOE_TANKSOE_HPP

#include "io.hpp"
#include "welfare.hpp"

namespace tanksoe {
inline constexpr const char* version = "1.0.0";
}

#endif
