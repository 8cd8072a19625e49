#pragma once

#include "errors.hpp"
#include "linalg.hpp"
#include "invertible_poly.hpp"
#include "symmetry_groups.hpp"
#include "quadform.hpp"
#include "lattice.hpp"
#include "curveconfig.hpp"
#include "verify.hpp"
