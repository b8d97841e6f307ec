#pragma once

#include "tsselect/config.hpp"
#include "tsselect/criteria.hpp"
#include "tsselect/critical_values.hpp"
#include "tsselect/dgp.hpp"
#include "tsselect/errors.hpp"
#include "tsselect/evaluate.hpp"
#include "tsselect/experiment.hpp"
#include "tsselect/hyptest.hpp"
#include "tsselect/params.hpp"
#include "tsselect/regress.hpp"
#include "tsselect/rng.hpp"
#include "tsselect/taxonomy.hpp"
#include "tsselect/vecm.hpp"
#include "tsselect/version.hpp"
