// knn_opinion.hpp - umbrella header.
#pragma once

#include "analysis.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "perturbation.hpp"
#include "random.hpp"
#include "state.hpp"
#include "topology.hpp"
