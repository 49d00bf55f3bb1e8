#pragma once

#include "roadsense/aggregator.hpp"
#include "roadsense/analyze.hpp"
#include "roadsense/bump.hpp"
#include "roadsense/calibration.hpp"
#include "roadsense/config.hpp"
#include "roadsense/error.hpp"
#include "roadsense/events.hpp"
#include "roadsense/geo.hpp"
#include "roadsense/gravity_filter.hpp"
#include "roadsense/pipeline.hpp"
#include "roadsense/roughness.hpp"
#include "roadsense/signal.hpp"
#include "roadsense/synth.hpp"
#include "roadsense/trip_io.hpp"
#include "roadsense/wavelet.hpp"

namespace roadsense {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace roadsense
