#pragma once

#include "brickwork/error.hpp"
#include "brickwork/circuit.hpp"
#include "brickwork/brick.hpp"
#include "brickwork/sim.hpp"
#include "brickwork/bricks/basic.hpp"
#include "brickwork/bricks/cross_correlation.hpp"
#include "brickwork/bricks/random_walk.hpp"
#include "brickwork/bricks/shortest_path.hpp"
#include "brickwork/scaffold.hpp"
#include "brickwork/io/circuit_doc.hpp"
#include "brickwork/io/raster.hpp"
#include "brickwork/io/scaffold_spec.hpp"
#include "brickwork/demos.hpp"
