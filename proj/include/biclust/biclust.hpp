#pragma once

#include "biclust/bicluster.hpp"
#include "biclust/bitset.hpp"
#include "biclust/concepts.hpp"
#include "biclust/context.hpp"
#include "biclust/discretize.hpp"
#include "biclust/error.hpp"
#include "biclust/evaluation.hpp"
#include "biclust/golden.hpp"
#include "biclust/io.hpp"
#include "biclust/matrix.hpp"
#include "biclust/measures.hpp"
#include "biclust/pipelines.hpp"
#include "biclust/rules.hpp"
