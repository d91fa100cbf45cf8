#pragma once

#include "resolvent_bounds/chebyshev.hpp"
#include "resolvent_bounds/disk_geometry.hpp"
#include "resolvent_bounds/errors.hpp"
#include "resolvent_bounds/extremal_toeplitz.hpp"
#include "resolvent_bounds/linalg.hpp"
#include "resolvent_bounds/model_operator.hpp"
#include "resolvent_bounds/parallel.hpp"
#include "resolvent_bounds/spectral_bounds.hpp"
