#pragma once

// Umbrella header: the full engine, agents, analytics, and tooling surface.

#include "werewolf/analytics.hpp"
#include "werewolf/bidding.hpp"
#include "werewolf/client.hpp"
#include "werewolf/core.hpp"
#include "werewolf/engine.hpp"
#include "werewolf/error.hpp"
#include "werewolf/llm_policy.hpp"
#include "werewolf/log.hpp"
#include "werewolf/memory.hpp"
#include "werewolf/mentions.hpp"
#include "werewolf/montecarlo.hpp"
#include "werewolf/policy.hpp"
#include "werewolf/prompt.hpp"
#include "werewolf/reveals.hpp"
#include "werewolf/rng.hpp"
#include "werewolf/run_config.hpp"
#include "werewolf/schema.hpp"
#include "werewolf/scripted.hpp"
#include "werewolf/tournament.hpp"
#include "werewolf/view.hpp"
