#pragma once

#include "qldpc/code.hpp"
#include "qldpc/construct.hpp"
#include "qldpc/decode.hpp"
#include "qldpc/errors.hpp"
#include "qldpc/gf2.hpp"
#include "qldpc/io.hpp"
#include "qldpc/noise.hpp"
#include "qldpc/pauli.hpp"
#include "qldpc/rng.hpp"
#include "qldpc/sim.hpp"
