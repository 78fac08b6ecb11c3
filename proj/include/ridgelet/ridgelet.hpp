#pragma once

// Umbrella header for the whole library.

#include "ridgelet/errors.hpp"
#include "ridgelet/fractional.hpp"
#include "ridgelet/grassmann.hpp"
#include "ridgelet/grid.hpp"
#include "ridgelet/kernels.hpp"
#include "ridgelet/lattice.hpp"
#include "ridgelet/quadrature.hpp"
#include "ridgelet/radon.hpp"
#include "ridgelet/recon.hpp"
#include "ridgelet/rng.hpp"
#include "ridgelet/sampled.hpp"
#include "ridgelet/special.hpp"
#include "ridgelet/wavelet.hpp"
