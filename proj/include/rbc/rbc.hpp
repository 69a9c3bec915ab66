#pragma once

#include "rbc/time.hpp"
#include "rbc/spacetime.hpp"
#include "rbc/codec.hpp"
#include "rbc/rng.hpp"
#include "rbc/agents.hpp"
#include "rbc/netsim.hpp"
#include "rbc/verifier.hpp"
#include "rbc/adversary.hpp"
#include "rbc/analysis.hpp"
#include "rbc/io.hpp"
