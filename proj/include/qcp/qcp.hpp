#pragma once

#include "qcp/ccp.hpp"
#include "qcp/classical.hpp"
#include "qcp/errors.hpp"
#include "qcp/evolution.hpp"
#include "qcp/gradient.hpp"
#include "qcp/hilbert.hpp"
#include "qcp/kd.hpp"
#include "qcp/propagators.hpp"
#include "qcp/random.hpp"
#include "qcp/reconstruction.hpp"
#include "qcp/version.hpp"
#include "qcp/weak_measurement.hpp"
