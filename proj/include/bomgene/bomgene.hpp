#pragma once

// Umbrella header.

#include "bomgene/boruta.hpp"
#include "bomgene/dataset.hpp"
#include "bomgene/error.hpp"
#include "bomgene/evaluation.hpp"
#include "bomgene/forest.hpp"
#include "bomgene/ingest.hpp"
#include "bomgene/mrmr.hpp"
#include "bomgene/parallel.hpp"
#include "bomgene/pipeline.hpp"
#include "bomgene/random.hpp"
#include "bomgene/stats.hpp"
