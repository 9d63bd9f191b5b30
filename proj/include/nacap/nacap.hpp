#pragma once

#include "nacap/errors.hpp"
#include "nacap/rational.hpp"
#include "nacap/precision.hpp"
#include "nacap/levi_civita.hpp"
#include "nacap/rational_function.hpp"
#include "nacap/literal.hpp"
#include "nacap/field_traits.hpp"
#include "nacap/weight_rules.hpp"
#include "nacap/graph.hpp"
#include "nacap/convergence.hpp"
#include "nacap/dirichlet.hpp"
#include "nacap/capacity.hpp"
#include "nacap/potential.hpp"
#include "nacap/transition.hpp"
