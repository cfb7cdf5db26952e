#pragma once

// Everything except the test fixtures under litscout/testing.

#include "litscout/core/error.hpp"
#include "litscout/core/paper_key.hpp"
#include "litscout/core/serialize.hpp"
#include "litscout/core/time.hpp"
#include "litscout/core/types.hpp"
#include "litscout/core/unicode.hpp"

#include "litscout/boolquery/ast.hpp"
#include "litscout/boolquery/match.hpp"
#include "litscout/boolquery/parser.hpp"
#include "litscout/boolquery/render.hpp"

#include "litscout/llmgate/backend.hpp"
#include "litscout/llmgate/prompt.hpp"
#include "litscout/llmgate/remote.hpp"
#include "litscout/llmgate/structured.hpp"

#include "litscout/planner/edits.hpp"
#include "litscout/planner/plan.hpp"

#include "litscout/retrieval/bm25.hpp"
#include "litscout/retrieval/deep.hpp"
#include "litscout/retrieval/index.hpp"
#include "litscout/retrieval/source.hpp"

#include "litscout/validator/assessments.hpp"
#include "litscout/validator/pipeline.hpp"
#include "litscout/validator/prompt.hpp"
#include "litscout/validator/scoring.hpp"

#include "litscout/evalkit/embed.hpp"
#include "litscout/evalkit/metrics.hpp"
#include "litscout/evalkit/report.hpp"
#include "litscout/evalkit/reward.hpp"
#include "litscout/evalkit/tokenize.hpp"

#include "litscout/orchestrator/manager.hpp"
#include "litscout/orchestrator/service.hpp"
#include "litscout/orchestrator/session.hpp"
#include "litscout/orchestrator/store.hpp"
