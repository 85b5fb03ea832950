#ifndef BREATHER_TESTS_COMMON_HPP
#define BREATHER_TESTS_COMMON_HPP

#include "oracles.hpp"

#include <gtest/gtest.h>

#endif
