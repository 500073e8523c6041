#pragma once

#include "smar/aml.hpp"
#include "smar/errdist.hpp"
#include "smar/error.hpp"
#include "smar/io.hpp"
#include "smar/mcharness.hpp"
#include "smar/model.hpp"
#include "smar/modelsel.hpp"
#include "smar/optim.hpp"
#include "smar/partial_fraction.hpp"
#include "smar/polynomial.hpp"
#include "smar/presets.hpp"
#include "smar/pseudofit.hpp"
#include "smar/report.hpp"
#include "smar/rng.hpp"
#include "smar/roots.hpp"
#include "smar/simulate.hpp"
#include "smar/spectra.hpp"
