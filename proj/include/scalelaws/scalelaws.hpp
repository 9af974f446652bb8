#pragma once

// Umbrella header: pulls in the whole library.

#include "scalelaws/cascade.hpp"
#include "scalelaws/entropy.hpp"
#include "scalelaws/fluctuation.hpp"
#include "scalelaws/image_cube.hpp"
#include "scalelaws/image_io.hpp"
#include "scalelaws/laws.hpp"
#include "scalelaws/necklace.hpp"
#include "scalelaws/parallel.hpp"
#include "scalelaws/synth.hpp"
#include "scalelaws/version.hpp"
