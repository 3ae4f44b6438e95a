// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include "opbayes/bessel.hpp"
#include "opbayes/calibration.hpp"
#include "opbayes/capital.hpp"
#include "opbayes/expert.hpp"
#include "opbayes/frequency.hpp"
#include "opbayes/gamma_fn.hpp"
#include "opbayes/gig.hpp"
#include "opbayes/io.hpp"
#include "opbayes/quadrature.hpp"
#include "opbayes/random.hpp"
#include "opbayes/severity_lognormal.hpp"
#include "opbayes/severity_pareto.hpp"
#include "opbayes/trajectory.hpp"
