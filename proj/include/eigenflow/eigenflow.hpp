#pragma once

// Umbrella header: the full eigenvalue-stability laboratory.

#include "eigenflow/almgren.hpp"
#include "eigenflow/blockdiag.hpp"
#include "eigenflow/charmap.hpp"
#include "eigenflow/cli.hpp"
#include "eigenflow/defaults.hpp"
#include "eigenflow/eigen.hpp"
#include "eigenflow/errors.hpp"
#include "eigenflow/grid.hpp"
#include "eigenflow/io.hpp"
#include "eigenflow/lab.hpp"
#include "eigenflow/matrix.hpp"
#include "eigenflow/parallel.hpp"
#include "eigenflow/report.hpp"
#include "eigenflow/rng.hpp"
#include "eigenflow/sobolev.hpp"
#include "eigenflow/unordered.hpp"
