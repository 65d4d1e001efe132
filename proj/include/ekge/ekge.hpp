// Umbrella header.
#pragma once

#include "ekge/adam.hpp"
#include "ekge/checkpoint.hpp"
#include "ekge/circular.hpp"
#include "ekge/common.hpp"
#include "ekge/dataset.hpp"
#include "ekge/evaluation.hpp"
#include "ekge/fft.hpp"
#include "ekge/filter_index.hpp"
#include "ekge/gradients.hpp"
#include "ekge/loss.hpp"
#include "ekge/params.hpp"
#include "ekge/projection.hpp"
#include "ekge/sampling.hpp"
#include "ekge/scoring.hpp"
#include "ekge/split.hpp"
#include "ekge/synthetic.hpp"
#include "ekge/table.hpp"
#include "ekge/training.hpp"
#include "ekge/tsv.hpp"
#include "ekge/types.hpp"
#include "ekge/vocabulary.hpp"
