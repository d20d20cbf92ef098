#pragma once

// Umbrella header: exact computation of the mod-p and rational cohomology of
// loop spaces of Thom spaces of spherical fibrations, through the collapsed
// second page of the loop-space spectral sequence.

#include "loopcoh/bar.hpp"
#include "loopcoh/basealg.hpp"
#include "loopcoh/emss.hpp"
#include "loopcoh/errors.hpp"
#include "loopcoh/matrix.hpp"
#include "loopcoh/report.hpp"
#include "loopcoh/scalar.hpp"
#include "loopcoh/series.hpp"
#include "loopcoh/spacespec.hpp"
#include "loopcoh/thom.hpp"
