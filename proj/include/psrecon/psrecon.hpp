#pragma once

#include "core.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "geometry.hpp"
#include "boundary.hpp"
#include "roots.hpp"
#include "processes.hpp"
#include "weights.hpp"
#include "reconstruct.hpp"
#include "variance.hpp"
#include "psmeasure.hpp"
#include "io.hpp"
#include "config.hpp"
#include "verify.hpp"
