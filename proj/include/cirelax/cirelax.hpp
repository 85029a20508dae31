#pragma once

#include "cirelax/atom_measure.hpp"
#include "cirelax/ci_triple.hpp"
#include "cirelax/dag.hpp"
#include "cirelax/distribution.hpp"
#include "cirelax/imeasure.hpp"
#include "cirelax/implication.hpp"
#include "cirelax/io.hpp"
#include "cirelax/polymatroid.hpp"
#include "cirelax/random.hpp"
#include "cirelax/rational.hpp"
#include "cirelax/semigraphoid.hpp"
#include "cirelax/shannon_lp.hpp"
#include "cirelax/simplex.hpp"
#include "cirelax/varset.hpp"
