#pragma once

#include "discforge/error.hpp"
#include "discforge/fourier_circle.hpp"
#include "discforge/model.hpp"
#include "discforge/perturbation.hpp"
#include "discforge/discs.hpp"
#include "discforge/rh_system.hpp"
#include "discforge/rh_solver.hpp"
#include "discforge/jets.hpp"
#include "discforge/determination.hpp"

namespace discforge {
inline constexpr const char* kVersion = "0.1.0";
}
