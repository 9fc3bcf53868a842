#pragma once

#include "limitscout/analyzer.hpp"
#include "limitscout/construction.hpp"
#include "limitscout/corpus.hpp"
#include "limitscout/errors.hpp"
#include "limitscout/expr.hpp"
#include "limitscout/format.hpp"
#include "limitscout/geometry.hpp"
#include "limitscout/io.hpp"
#include "limitscout/paths.hpp"
