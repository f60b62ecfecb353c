#pragma once

// Umbrella header.

#include "qgt/campaign.hpp"
#include "qgt/deformed.hpp"
#include "qgt/frechet.hpp"
#include "qgt/functionals.hpp"
#include "qgt/inequalities.hpp"
#include "qgt/matrix.hpp"
#include "qgt/random.hpp"
#include "qgt/spectral.hpp"
#include "qgt/version.hpp"
