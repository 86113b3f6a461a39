#pragma once

#include "closedexact/errors.hpp"
#include "closedexact/multiindex.hpp"
#include "closedexact/symmetry.hpp"
#include "closedexact/hermite.hpp"
#include "closedexact/field.hpp"
#include "closedexact/lattice.hpp"
#include "closedexact/spectral_grid.hpp"
#include "closedexact/transport.hpp"
#include "closedexact/exactgen.hpp"
#include "closedexact/graph.hpp"
