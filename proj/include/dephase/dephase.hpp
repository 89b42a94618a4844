// dephase.hpp: Umbrella header

#pragma once

#include "dephase/quadrature.hpp"
#include "dephase/spectral_density.hpp"
#include "dephase/kernels.hpp"
#include "dephase/dephasing_model.hpp"
#include "dephase/volterra.hpp"
#include "dephase/runner.hpp"
