#pragma once

#include "pbw/core.hpp"
#include "pbw/cube.hpp"
#include "pbw/formula.hpp"
#include "pbw/formula_eval.hpp"
#include "pbw/increasing.hpp"
#include "pbw/muchnik.hpp"
#include "pbw/periodicity.hpp"
#include "pbw/pipeline.hpp"
#include "pbw/relation.hpp"
#include "pbw/relation_spec.hpp"
#include "pbw/schemas.hpp"
#include "pbw/shift_search.hpp"
#include "pbw/verdict.hpp"
