#pragma once

// Umbrella header for the analytics core (no HTTP or CLI dependencies).

#include "ctfeed/analytics.hpp"
#include "ctfeed/diagnostic.hpp"
#include "ctfeed/event_log.hpp"
#include "ctfeed/game_model.hpp"
#include "ctfeed/session.hpp"
#include "ctfeed/snapshot.hpp"
#include "ctfeed/synth.hpp"
#include "ctfeed/time.hpp"
#include "ctfeed/views.hpp"
