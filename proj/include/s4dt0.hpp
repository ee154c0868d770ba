/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "s4dt0/decide.hpp"
#include "s4dt0/error.hpp"
#include "s4dt0/evaluator.hpp"
#include "s4dt0/kripke.hpp"
#include "s4dt0/morphism.hpp"
#include "s4dt0/omega_space.hpp"
#include "s4dt0/point_set.hpp"
#include "s4dt0/syntax.hpp"
#include "s4dt0/topo.hpp"
