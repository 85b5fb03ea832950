#ifndef BREATHER_BREATHER_HPP
#define BREATHER_BREATHER_HPP

#include "assumptions.hpp"
#include "basis.hpp"
#include "bounds.hpp"
#include "config.hpp"
#include "functional.hpp"
#include "io.hpp"
#include "measure.hpp"
#include "potential.hpp"
#include "report.hpp"
#include "solver.hpp"
#include "spectrum.hpp"
#include "transfer.hpp"

#endif
