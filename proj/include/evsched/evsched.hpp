#pragma once

// Umbrella header: free-text EV charging requests to power schedules, plus
// the evaluation harness.

#include "evsched/core/energy.hpp"
#include "evsched/core/environment.hpp"
#include "evsched/core/instances.hpp"
#include "evsched/core/serialize.hpp"
#include "evsched/core/types.hpp"
#include "evsched/core/validate.hpp"
#include "evsched/solvers/dispatch.hpp"
#include "evsched/llm/client.hpp"
#include "evsched/agents/classifier.hpp"
#include "evsched/agents/assemble.hpp"
#include "evsched/pipeline/pipeline.hpp"
#include "evsched/eval/corpus.hpp"
#include "evsched/eval/ira.hpp"
#include "evsched/eval/arol.hpp"
#include "evsched/eval/mixture.hpp"
#include "evsched/eval/report.hpp"
