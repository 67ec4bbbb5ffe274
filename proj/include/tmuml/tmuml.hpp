#pragma once

// Umbrella header for the whole toolchain: UML-subset ingestion, the
// use-case and class transformations into a single TM static model,
// well-formedness validation, event regions and the behavior graph,
// trace simulation, and DOT emission.

#include "tmuml/diff.hpp"
#include "tmuml/dot.hpp"
#include "tmuml/errors.hpp"
#include "tmuml/events.hpp"
#include "tmuml/model.hpp"
#include "tmuml/report.hpp"
#include "tmuml/tm_text.hpp"
#include "tmuml/transform.hpp"
#include "tmuml/uml.hpp"
#include "tmuml/validate.hpp"
