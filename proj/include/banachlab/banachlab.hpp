#pragma once

// umbrella header

#include "banachlab/errors.hpp"
#include "banachlab/space.hpp"
#include "banachlab/sampling.hpp"
#include "banachlab/modulus.hpp"
#include "banachlab/chain.hpp"
#include "banachlab/retraction.hpp"
#include "banachlab/compactify.hpp"
#include "banachlab/operators.hpp"
#include "banachlab/bpb.hpp"
#include "banachlab/io.hpp"
