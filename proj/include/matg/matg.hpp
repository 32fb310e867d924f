#pragma once

#include "matg/error.hpp"
#include "matg/linalg.hpp"
#include "matg/matrix_group.hpp"
#include "matg/groupoid.hpp"
#include "matg/constitutive.hpp"
#include "matg/material_body.hpp"
#include "matg/isomorphism_solver.hpp"
#include "matg/double_groupoid.hpp"
#include "matg/classifier.hpp"
#include "matg/fixtures.hpp"
#include "matg/io.hpp"
#include "matg/svg.hpp"
