#pragma once

#include "layerscatter/errors.hpp"
#include "layerscatter/forward.hpp"
#include "layerscatter/harmonic.hpp"
#include "layerscatter/inverse.hpp"
#include "layerscatter/media.hpp"
#include "layerscatter/moebius.hpp"
#include "layerscatter/noise.hpp"
#include "layerscatter/opuc.hpp"
#include "layerscatter/parallel.hpp"
#include "layerscatter/specfun.hpp"
#include "layerscatter/version.hpp"
