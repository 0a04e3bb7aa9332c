#pragma once

// Umbrella header for the momentum-space trembling-motion toolkit.

#include "dynamics.hpp"
#include "eig.hpp"
#include "matrix.hpp"
#include "momentum.hpp"
#include "representations.hpp"
#include "signal.hpp"
#include "spin.hpp"
#include "transforms.hpp"
#include "version.hpp"
#include "wavepacket.hpp"
