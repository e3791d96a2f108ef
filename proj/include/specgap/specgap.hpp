#pragma once

#include "specgap/analysis.hpp"
#include "specgap/dense_oracle.hpp"
#include "specgap/flow.hpp"
#include "specgap/jacobi.hpp"
#include "specgap/operators.hpp"
#include "specgap/potentials.hpp"
#include "specgap/prng.hpp"
#include "specgap/serialize.hpp"
#include "specgap/sturm.hpp"
