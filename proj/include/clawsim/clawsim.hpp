// clawsim.hpp — umbrella header.

#pragma once

#include "clawsim/combinatorics.hpp"
#include "clawsim/detect.hpp"
#include "clawsim/errors.hpp"
#include "clawsim/harness.hpp"
#include "clawsim/instance.hpp"
#include "clawsim/johnson.hpp"
#include "clawsim/rng.hpp"
#include "clawsim/search.hpp"
#include "clawsim/walk.hpp"
