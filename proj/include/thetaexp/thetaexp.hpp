// SPDX-License-Identifier: MIT
/**
 * @file thetaexp.hpp
 * @brief Umbrella header.
 */

#pragma once

#include "thetaexp/chain_operator.hpp"
#include "thetaexp/errors.hpp"
#include "thetaexp/gauss_kuzmin.hpp"
#include "thetaexp/grid_function.hpp"
#include "thetaexp/measures.hpp"
#include "thetaexp/natural_extension.hpp"
#include "thetaexp/rng.hpp"
#include "thetaexp/series.hpp"
#include "thetaexp/theta_core.hpp"
#include "thetaexp/transfer_operator.hpp"
