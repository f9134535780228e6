#pragma once

#include "lattice_epr/core.hpp"
#include "lattice_epr/lattice.hpp"
#include "lattice_epr/dipole.hpp"
#include "lattice_epr/diatom.hpp"
#include "lattice_epr/estimates.hpp"
#include "lattice_epr/analysis.hpp"
#include "lattice_epr/scenario.hpp"
#include "lattice_epr/pipeline.hpp"
