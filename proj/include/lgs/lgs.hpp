#pragma once

#include "lgs/defense.hpp"
#include "lgs/filters.hpp"
#include "lgs/gradients.hpp"
#include "lgs/io.hpp"
#include "lgs/jpeg.hpp"
#include "lgs/metrics.hpp"
#include "lgs/parallel.hpp"
#include "lgs/patch.hpp"
#include "lgs/rng.hpp"
#include "lgs/smoothing.hpp"
#include "lgs/tvm.hpp"
#include "lgs/types.hpp"
