#pragma once

#include "d2dcache/codes.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/cost_model.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/geometry.hpp"
#include "d2dcache/markov.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/parallel.hpp"
#include "d2dcache/quadrature.hpp"
#include "d2dcache/serialization.hpp"
#include "d2dcache/simulator.hpp"
