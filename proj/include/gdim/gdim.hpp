#pragma once

#include "gdim/common.hpp"
#include "gdim/dimension.hpp"
#include "gdim/dstar.hpp"
#include "gdim/entropy.hpp"
#include "gdim/gauss.hpp"
#include "gdim/generic.hpp"
#include "gdim/markov_approx.hpp"
#include "gdim/measure.hpp"
#include "gdim/orbit.hpp"
#include "gdim/potential.hpp"
#include "gdim/stream.hpp"
#include "gdim/transfer.hpp"
#include "gdim/weights.hpp"
#include "gdim/word.hpp"
