// SPDX-License-Identifier: MIT
/**
 * @file errors.hpp
 * @brief Exception types shared by every thetaexp module.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace thetaexp {

/// A parameter or argument outside its documented domain.
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed its configured work budget.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) {
        throw invalid_parameter(what);
    }
}

}  // namespace detail
}  // namespace thetaexp
