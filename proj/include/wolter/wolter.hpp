/// @file wolter.hpp
/// @brief Umbrella header.
#pragma once

#include "wolter/bernoulli.hpp"
#include "wolter/checks.hpp"
#include "wolter/config.hpp"
#include "wolter/field.hpp"
#include "wolter/flow.hpp"
#include "wolter/gw_scalar.hpp"
#include "wolter/scenario.hpp"
#include "wolter/types.hpp"
