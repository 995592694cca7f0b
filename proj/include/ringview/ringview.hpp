#pragma once

#include "ringview/errors.hpp"
#include "ringview/io/csv.hpp"
#include "ringview/opcount.hpp"
#include "ringview/operators.hpp"
#include "ringview/planner/plan.hpp"
#include "ringview/relation.hpp"
#include "ringview/rings/cofactor.hpp"
#include "ringview/rings/relational.hpp"
#include "ringview/rings/scalar.hpp"
#include "ringview/runtime/engine.hpp"
#include "ringview/runtime/enumerate.hpp"
#include "ringview/runtime/oracle.hpp"
#include "ringview/schema.hpp"
#include "ringview/value.hpp"
