#pragma once

#include "mdc/config.hpp"
#include "mdc/csv.hpp"
#include "mdc/depvar.hpp"
#include "mdc/diagnostics.hpp"
#include "mdc/error.hpp"
#include "mdc/ingest.hpp"
#include "mdc/instrument.hpp"
#include "mdc/metrics.hpp"
#include "mdc/panel.hpp"
#include "mdc/pipeline.hpp"
#include "mdc/regression.hpp"
#include "mdc/report.hpp"
#include "mdc/selection.hpp"
#include "mdc/series.hpp"
#include "mdc/specialization.hpp"
#include "mdc/stats.hpp"
#include "mdc/study.hpp"
#include "mdc/synthetic.hpp"
#include "mdc/types.hpp"
