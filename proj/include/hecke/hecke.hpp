#pragma once

#include "hecke/bessel.hpp"
#include "hecke/bound_report.hpp"
#include "hecke/bounds.hpp"
#include "hecke/cusp_mass.hpp"
#include "hecke/hecke_sequence.hpp"
#include "hecke/number_theory.hpp"
#include "hecke/numeric.hpp"
#include "hecke/prime_models.hpp"
#include "hecke/quadrature.hpp"
