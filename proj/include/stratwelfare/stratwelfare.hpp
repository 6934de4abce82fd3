#pragma once

#include "config.hpp"
#include "core.hpp"
#include "cultures.hpp"
#include "exact_sum.hpp"
#include "experiments.hpp"
#include "manipulation.hpp"
#include "preflib.hpp"
#include "profile_io.hpp"
#include "rng.hpp"
#include "rules.hpp"
#include "welfare.hpp"
