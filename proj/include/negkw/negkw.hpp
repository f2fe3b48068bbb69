#pragma once

#include "negkw/account.hpp"
#include "negkw/bounds.hpp"
#include "negkw/builder.hpp"
#include "negkw/eraser.hpp"
#include "negkw/eraser_engine.hpp"
#include "negkw/error.hpp"
#include "negkw/keyword.hpp"
#include "negkw/serialize.hpp"
#include "negkw/simulate.hpp"
#include "negkw/synth.hpp"
#include "negkw/update.hpp"
#include "negkw/verifier.hpp"
