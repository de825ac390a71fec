#pragma once

#include "lattika/arakelov.hpp"
#include "lattika/bounded_real.hpp"
#include "lattika/enumeration.hpp"
#include "lattika/envelope.hpp"
#include "lattika/error.hpp"
#include "lattika/lattice.hpp"
#include "lattika/matrix.hpp"
#include "lattika/measures.hpp"
#include "lattika/mellin.hpp"
#include "lattika/modular_delta.hpp"
#include "lattika/quadform.hpp"
#include "lattika/quadrature.hpp"
#include "lattika/rational.hpp"
#include "lattika/special.hpp"
#include "lattika/theta.hpp"
