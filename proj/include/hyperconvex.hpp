#pragma once

#include "hyperconvex/core.hpp"
#include "hyperconvex/repgen.hpp"
#include "hyperconvex/words.hpp"
#include "hyperconvex/spectra.hpp"
#include "hyperconvex/orbits.hpp"
#include "hyperconvex/counting.hpp"
#include "hyperconvex/pressure.hpp"
#include "hyperconvex/growth.hpp"
#include "hyperconvex/io.hpp"
