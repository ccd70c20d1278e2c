#pragma once

#include "lanemden/bessel.hpp"
#include "lanemden/core.hpp"
#include "lanemden/diagnostics.hpp"
#include "lanemden/io.hpp"
#include "lanemden/laplacian.hpp"
#include "lanemden/planar.hpp"
#include "lanemden/radial.hpp"
#include "lanemden/spectral.hpp"
#include "lanemden/sweeps.hpp"
