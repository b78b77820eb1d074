#pragma once

// Zero-error capacity toolkit: quantum channel simulation, adjacency of
// input states under POVM measurements, characteristic graphs and their
// powers, and exact clique search driving certified capacity lower bounds.

#include "qzec/capacity.hpp"
#include "qzec/channels.hpp"
#include "qzec/clique.hpp"
#include "qzec/distinguishability.hpp"
#include "qzec/graph.hpp"
#include "qzec/matrix.hpp"
#include "qzec/problem_io.hpp"
#include "qzec/propositions.hpp"
#include "qzec/quantum.hpp"
#include "qzec/random.hpp"
#include "qzec/tolerances.hpp"
