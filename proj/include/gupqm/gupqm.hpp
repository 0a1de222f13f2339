#pragma once

#include "gupqm/core.hpp"
#include "gupqm/random.hpp"
#include "gupqm/parallel.hpp"
#include "gupqm/quadrature.hpp"
#include "gupqm/multipoly.hpp"
#include "gupqm/gauss_moments.hpp"
#include "gupqm/gup_algebra.hpp"
#include "gupqm/classical.hpp"
#include "gupqm/kernels.hpp"
#include "gupqm/spectral.hpp"
#include "gupqm/bessel.hpp"
#include "gupqm/green.hpp"
#include "gupqm/verify.hpp"
#include "gupqm/suite.hpp"
#include "gupqm/report.hpp"
