#pragma once

#include "socsec/channel.hpp"
#include "socsec/errors.hpp"
#include "socsec/gamma_approx.hpp"
#include "socsec/geometry.hpp"
#include "socsec/montecarlo.hpp"
#include "socsec/outage.hpp"
#include "socsec/parallel.hpp"
#include "socsec/params.hpp"
#include "socsec/quadrature.hpp"
#include "socsec/random.hpp"
#include "socsec/specfun.hpp"
