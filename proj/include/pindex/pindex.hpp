#pragma once

#include "pindex/errors.hpp"
#include "pindex/rational.hpp"
#include "pindex/exterior.hpp"
#include "pindex/matrix.hpp"
#include "pindex/lattice.hpp"
#include "pindex/congruence.hpp"
#include "pindex/obstruction.hpp"
#include "pindex/severi_brauer.hpp"
#include "pindex/upper_bound.hpp"
