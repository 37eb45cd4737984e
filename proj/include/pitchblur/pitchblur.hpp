#pragma once

#include "pitchblur/blur/augment.hpp"
#include "pitchblur/blur/effect.hpp"
#include "pitchblur/blur/kernel.hpp"
#include "pitchblur/blur/patches.hpp"
#include "pitchblur/camera/camera.hpp"
#include "pitchblur/core/error.hpp"
#include "pitchblur/core/hash.hpp"
#include "pitchblur/core/image.hpp"
#include "pitchblur/core/io.hpp"
#include "pitchblur/core/parallel.hpp"
#include "pitchblur/core/pose.hpp"
#include "pitchblur/core/random.hpp"
#include "pitchblur/core/split.hpp"
#include "pitchblur/enhance/enhance.hpp"
#include "pitchblur/flow/estimate.hpp"
#include "pitchblur/flow/flow_field.hpp"
#include "pitchblur/metrics/metrics.hpp"
#include "pitchblur/pipeline/config.hpp"
#include "pitchblur/pipeline/pipeline.hpp"
#include "pitchblur/sync/sync.hpp"
