#pragma once

// Umbrella header for the whole library.

#include "fibnest/combinatorics.hpp"
#include "fibnest/constants.hpp"
#include "fibnest/errors.hpp"
#include "fibnest/intervals.hpp"
#include "fibnest/kneading.hpp"
#include "fibnest/map.hpp"
#include "fibnest/nest.hpp"
#include "fibnest/real.hpp"
#include "fibnest/report.hpp"
#include "fibnest/solve.hpp"
#include "fibnest/sweep.hpp"
#include "fibnest/verify.hpp"
