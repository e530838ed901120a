#pragma once

#include "ldwait/error.hpp"
#include "ldwait/event.hpp"
#include "ldwait/exactseries.hpp"
#include "ldwait/laplace.hpp"
#include "ldwait/log_sum.hpp"
#include "ldwait/objective.hpp"
#include "ldwait/process.hpp"
#include "ldwait/rate.hpp"
#include "ldwait/rng.hpp"
#include "ldwait/specfun.hpp"
