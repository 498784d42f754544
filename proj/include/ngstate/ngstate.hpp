#pragma once

#include "ngstate/coherence.hpp"
#include "ngstate/densmat.hpp"
#include "ngstate/errors.hpp"
#include "ngstate/io.hpp"
#include "ngstate/observables.hpp"
#include "ngstate/oracle.hpp"
#include "ngstate/parallel.hpp"
#include "ngstate/saddle.hpp"
#include "ngstate/specfun.hpp"
#include "ngstate/state.hpp"
#include "ngstate/statemap.hpp"
#include "ngstate/validate.hpp"
#include "ngstate/version.hpp"
#include "ngstate/wigner.hpp"
