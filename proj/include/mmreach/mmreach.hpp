#pragma once

#include "mmreach/core.hpp"
#include "mmreach/decomposition.hpp"
#include "mmreach/embedding.hpp"
#include "mmreach/error.hpp"
#include "mmreach/expr.hpp"
#include "mmreach/optimize.hpp"
#include "mmreach/oracle.hpp"
#include "mmreach/parallel.hpp"
#include "mmreach/random.hpp"
#include "mmreach/systems.hpp"
