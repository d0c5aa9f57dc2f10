#pragma once

#include "leafbench/clahe.hpp"
#include "leafbench/config.hpp"
#include "leafbench/error.hpp"
#include "leafbench/filters.hpp"
#include "leafbench/image_io.hpp"
#include "leafbench/metrics.hpp"
#include "leafbench/noise.hpp"
#include "leafbench/pipeline.hpp"
#include "leafbench/random.hpp"
#include "leafbench/raster.hpp"
#include "leafbench/report.hpp"
