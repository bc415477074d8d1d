#pragma once

// Umbrella header for the patprof syntactic-profiling library.

#include "patprof/atom.hpp"
#include "patprof/cache.hpp"
#include "patprof/charset.hpp"
#include "patprof/cli.hpp"
#include "patprof/clustering.hpp"
#include "patprof/cost.hpp"
#include "patprof/errors.hpp"
#include "patprof/ingest.hpp"
#include "patprof/learner.hpp"
#include "patprof/output.hpp"
#include "patprof/pattern.hpp"
#include "patprof/profiler.hpp"
#include "patprof/regex.hpp"
#include "patprof/rng.hpp"
#include "patprof/significant.hpp"
#include "patprof/unicode.hpp"
#include "patprof/universe.hpp"
