#pragma once

#include "pdflow/condensation.hpp"
#include "pdflow/diagram.hpp"
#include "pdflow/errors.hpp"
#include "pdflow/geometry.hpp"
#include "pdflow/kd_tree.hpp"
#include "pdflow/lower_bound.hpp"
#include "pdflow/network.hpp"
#include "pdflow/oracle.hpp"
#include "pdflow/parallel.hpp"
#include "pdflow/pipeline.hpp"
#include "pdflow/simplex.hpp"
#include "pdflow/spanner.hpp"
#include "pdflow/synthetic.hpp"
