#pragma once

#include "mapscale/rational.hpp"
#include "mapscale/simplicial_complex.hpp"
#include "mapscale/metric_space.hpp"
#include "mapscale/cover.hpp"
#include "mapscale/cover_tower.hpp"
#include "mapscale/tower_builders.hpp"
#include "mapscale/pullback.hpp"
#include "mapscale/mapper.hpp"
#include "mapscale/full_complex.hpp"
#include "mapscale/homology.hpp"
#include "mapscale/persistence.hpp"
#include "mapscale/bottleneck.hpp"
#include "mapscale/pseudometric.hpp"
#include "mapscale/instance_gen.hpp"
#include "mapscale/experiments.hpp"
