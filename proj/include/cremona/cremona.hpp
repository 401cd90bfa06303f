#pragma once

#include "cremona/error.hpp"
#include "cremona/integer.hpp"
#include "cremona/matrix.hpp"
#include "cremona/cyclo.hpp"
#include "cremona/torus.hpp"
#include "cremona/poly.hpp"
#include "cremona/ratfun.hpp"
#include "cremona/geomap.hpp"
#include "cremona/eigen.hpp"
#include "cremona/jordan.hpp"
#include "cremona/lattice.hpp"
#include "cremona/orbit.hpp"
#include "cremona/aut.hpp"
#include "cremona/bir.hpp"
#include "cremona/projective.hpp"
#include "cremona/parser.hpp"
#include "cremona/certificate.hpp"
