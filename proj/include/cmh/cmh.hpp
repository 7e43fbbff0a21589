#pragma once

#include "cmh/error.hpp"
#include "cmh/quadrature.hpp"
#include "cmh/special_fn.hpp"
#include "cmh/measure.hpp"
#include "cmh/moment_seq.hpp"
#include "cmh/grid.hpp"
#include "cmh/gen_func.hpp"
#include "cmh/harmonic_map.hpp"
#include "cmh/special_maps.hpp"
#include "cmh/io.hpp"
