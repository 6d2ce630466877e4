#pragma once

// Umbrella header.

#include "petzlab/errors.hpp"
#include "petzlab/operators.hpp"
#include "petzlab/channels.hpp"
#include "petzlab/petz.hpp"
#include "petzlab/renyi.hpp"
#include "petzlab/bounds.hpp"
#include "petzlab/sampling.hpp"
#include "petzlab/io.hpp"
#include "petzlab/experiment.hpp"
#include "petzlab/plot.hpp"
#include "petzlab/harness.hpp"
#include "petzlab/verify.hpp"
