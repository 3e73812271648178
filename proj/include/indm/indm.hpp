#pragma once

#include "branching.hpp"
#include "dp.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "pathdecomp.hpp"
#include "pipeline.hpp"
