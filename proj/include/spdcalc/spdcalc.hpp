#pragma once

#include "spdcalc/errors.hpp"
#include "spdcalc/matrix.hpp"
#include "spdcalc/symmetric.hpp"
#include "spdcalc/quadrature.hpp"
#include "spdcalc/matrix_functions.hpp"
#include "spdcalc/report.hpp"
#include "spdcalc/norm_bounds.hpp"
#include "spdcalc/curve.hpp"
#include "spdcalc/frechet.hpp"
#include "spdcalc/conjugation_average.hpp"
#include "spdcalc/inequalities.hpp"
#include "spdcalc/gallery.hpp"
#include "spdcalc/random.hpp"
#include "spdcalc/sweep.hpp"
#include "spdcalc/figure.hpp"
#include "spdcalc/acceptance.hpp"
