#ifndef DDVEP_DDVEP_HPP
#define DDVEP_DDVEP_HPP

#include "ddvep/error.hpp"
#include "ddvep/polyhedron.hpp"
#include "ddvep/dd.hpp"
#include "ddvep/lp.hpp"
#include "ddvep/oracle.hpp"
#include "ddvep/benson.hpp"
#include "ddvep/io.hpp"
#include "ddvep/bench.hpp"

#endif  // DDVEP_DDVEP_HPP
