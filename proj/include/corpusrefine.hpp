// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header.
#pragma once

#include "corpusrefine/cli.hpp"
#include "corpusrefine/config.hpp"
#include "corpusrefine/corpus.hpp"
#include "corpusrefine/csv.hpp"
#include "corpusrefine/embedding.hpp"
#include "corpusrefine/error.hpp"
#include "corpusrefine/hs.hpp"
#include "corpusrefine/huffman.hpp"
#include "corpusrefine/materials.hpp"
#include "corpusrefine/matrix.hpp"
#include "corpusrefine/persistence.hpp"
#include "corpusrefine/refine.hpp"
#include "corpusrefine/resources.hpp"
#include "corpusrefine/rng.hpp"
#include "corpusrefine/screen.hpp"
#include "corpusrefine/selection.hpp"
#include "corpusrefine/synth.hpp"
