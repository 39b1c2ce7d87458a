#pragma once

#include "smoothcvx/errors.hpp"
#include "smoothcvx/exact.hpp"
#include "smoothcvx/report.hpp"
#include "smoothcvx/counterexample.hpp"
#include "smoothcvx/bounds.hpp"
#include "smoothcvx/barrier.hpp"
#include "smoothcvx/chain_qcqp.hpp"
#include "smoothcvx/interpolation.hpp"
#include "smoothcvx/property_suite.hpp"
#include "smoothcvx/export.hpp"
