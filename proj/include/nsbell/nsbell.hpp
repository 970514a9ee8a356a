#pragma once

#include "nsbell/constructions.hpp"
#include "nsbell/errors.hpp"
#include "nsbell/experiments.hpp"
#include "nsbell/games.hpp"
#include "nsbell/json_io.hpp"
#include "nsbell/lp.hpp"
#include "nsbell/polytopes.hpp"
#include "nsbell/prng.hpp"
#include "nsbell/rational.hpp"
#include "nsbell/rational_log.hpp"
#include "nsbell/sampling.hpp"
#include "nsbell/tensor.hpp"
#include "nsbell/values.hpp"
