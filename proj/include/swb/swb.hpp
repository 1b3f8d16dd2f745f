#pragma once

// Umbrella header for the solver library (the CLI lives in swb/cli.hpp).

#include "swb/analytic.hpp"
#include "swb/core.hpp"
#include "swb/diagnostics.hpp"
#include "swb/flux.hpp"
#include "swb/io.hpp"
#include "swb/reconstruct.hpp"
#include "swb/scheme.hpp"
