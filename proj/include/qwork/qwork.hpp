#pragma once

#include "qwork/errors.hpp"
#include "qwork/linalg.hpp"
#include "qwork/state.hpp"
#include "qwork/measurement.hpp"
#include "qwork/entropy.hpp"
#include "qwork/entanglement.hpp"
#include "qwork/presets.hpp"
#include "qwork/work.hpp"
#include "qwork/protocol.hpp"
#include "qwork/rng.hpp"
#include "qwork/random.hpp"
