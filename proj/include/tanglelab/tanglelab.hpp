#pragma once

// Umbrella header.

#include "tanglelab/core_model.hpp"
#include "tanglelab/dynamics.hpp"
#include "tanglelab/homoclinic.hpp"
#include "tanglelab/interp.hpp"
#include "tanglelab/melnikov.hpp"
#include "tanglelab/ode.hpp"
#include "tanglelab/parallel.hpp"
#include "tanglelab/pipeline.hpp"
#include "tanglelab/presets.hpp"
#include "tanglelab/quadrature.hpp"
#include "tanglelab/regimes.hpp"
#include "tanglelab/retmap.hpp"
#include "tanglelab/rng.hpp"
#include "tanglelab/roots.hpp"
#include "tanglelab/section_map.hpp"
#include "tanglelab/serialize.hpp"
