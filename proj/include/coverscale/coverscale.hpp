#pragma once

#include "coverscale/audiodist.hpp"
#include "coverscale/corpus.hpp"
#include "coverscale/error.hpp"
#include "coverscale/eval.hpp"
#include "coverscale/experiment.hpp"
#include "coverscale/fusion.hpp"
#include "coverscale/index.hpp"
#include "coverscale/retrieval.hpp"
#include "coverscale/rng.hpp"
#include "coverscale/runfile.hpp"
#include "coverscale/textnorm.hpp"
