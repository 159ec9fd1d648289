#pragma once

#include "errors.hpp"
#include "specfun.hpp"
#include "fracderiv.hpp"
#include "polynomial.hpp"
#include "fode.hpp"
#include "subspace.hpp"
#include "equations.hpp"
#include "catalog.hpp"
#include "verify.hpp"
#include "figures.hpp"
#include "config.hpp"
