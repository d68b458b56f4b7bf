#ifndef GLSHP_GLSHP_HPP
#define GLSHP_GLSHP_HPP

#include "glshp/fracalg.hpp"
#include "glshp/hpm.hpp"
#include "glshp/lsq.hpp"
#include "glshp/pipeline.hpp"
#include "glshp/problem_io.hpp"
#include "glshp/problems.hpp"
#include "glshp/quadrature.hpp"
#include "glshp/series.hpp"
#include "glshp/wronskian.hpp"

#endif  // GLSHP_GLSHP_HPP
