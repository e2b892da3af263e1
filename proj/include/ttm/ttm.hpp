#pragma once

// Umbrella header for the tensorial template matching engine.

#include "ttm/errors.hpp"
#include "ttm/fft.hpp"
#include "ttm/matching.hpp"
#include "ttm/parallel.hpp"
#include "ttm/prng.hpp"
#include "ttm/quaternion.hpp"
#include "ttm/resample.hpp"
#include "ttm/rotation_set.hpp"
#include "ttm/sshopm.hpp"
#include "ttm/ssp.hpp"
#include "ttm/symtensor.hpp"
#include "ttm/synthetic.hpp"
#include "ttm/tensor_field.hpp"
#include "ttm/validation.hpp"
#include "ttm/volume.hpp"
#include "ttm/volume_io.hpp"
