#pragma once

#include "credamp/analysis.hpp"
#include "credamp/bca.hpp"
#include "credamp/bootstrap.hpp"
#include "credamp/ingest.hpp"
#include "credamp/kmeans1d.hpp"
#include "credamp/normal.hpp"
#include "credamp/quantile.hpp"
#include "credamp/report.hpp"
#include "credamp/rng.hpp"
#include "credamp/strata.hpp"
#include "credamp/synth.hpp"
#include "credamp/types.hpp"
#include "credamp/url.hpp"
