#pragma once

#include "vqlogic/answerers.hpp"
#include "vqlogic/catalog.hpp"
#include "vqlogic/datagen.hpp"
#include "vqlogic/embeddings.hpp"
#include "vqlogic/errors.hpp"
#include "vqlogic/evaluate.hpp"
#include "vqlogic/formula.hpp"
#include "vqlogic/frechet.hpp"
#include "vqlogic/loaders.hpp"
#include "vqlogic/losses.hpp"
#include "vqlogic/negation.hpp"
#include "vqlogic/parser.hpp"
#include "vqlogic/records.hpp"
#include "vqlogic/rng.hpp"
#include "vqlogic/textgen.hpp"
