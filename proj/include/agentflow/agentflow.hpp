// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "agentflow/error.hpp"
#include "agentflow/executor.hpp"
#include "agentflow/flow.hpp"
#include "agentflow/async_flow.hpp"
#include "agentflow/instrumentation.hpp"

#include "agentflow/agent/state.hpp"
#include "agentflow/agent/tools.hpp"
#include "agentflow/agent/model_client.hpp"
#include "agentflow/agent/steps.hpp"
#include "agentflow/agent/briefing.hpp"

#include "agentflow/mcp/wire.hpp"
#include "agentflow/meta/orchestrator.hpp"
