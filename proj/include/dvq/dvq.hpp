#pragma once

/// Convenience header pulling in the whole library: query AST, parser,
/// canonical printer, schema validation, in-memory execution, chart
/// lowering, quality filter, difficulty scoring, evaluation metrics,
/// prompt plumbing, the synthesis pipeline, and dataset splitting.

#include "dvq/ast.hpp"
#include "dvq/cell.hpp"
#include "dvq/chart.hpp"
#include "dvq/execute.hpp"
#include "dvq/filter.hpp"
#include "dvq/hardness.hpp"
#include "dvq/http_backend.hpp"
#include "dvq/llm.hpp"
#include "dvq/metrics.hpp"
#include "dvq/mockllm.hpp"
#include "dvq/parse.hpp"
#include "dvq/pipeline.hpp"
#include "dvq/print.hpp"
#include "dvq/schema.hpp"
#include "dvq/split.hpp"
#include "dvq/table.hpp"
#include "dvq/validate.hpp"
