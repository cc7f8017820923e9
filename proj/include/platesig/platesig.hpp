#pragma once

#include "platesig/assembly.hpp"
#include "platesig/bfs.hpp"
#include "platesig/dof_map.hpp"
#include "platesig/fields.hpp"
#include "platesig/hermite.hpp"
#include "platesig/io.hpp"
#include "platesig/linear_solver.hpp"
#include "platesig/mesh.hpp"
#include "platesig/newton.hpp"
#include "platesig/plate.hpp"
#include "platesig/plate_solver.hpp"
#include "platesig/poisson.hpp"
#include "platesig/postprocess.hpp"
#include "platesig/quadrature.hpp"
#include "platesig/scenario.hpp"
