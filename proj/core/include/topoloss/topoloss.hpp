#pragma once

#include "topoloss/error.hpp"
#include "topoloss/geometry.hpp"
#include "topoloss/io.hpp"
#include "topoloss/loss.hpp"
#include "topoloss/matching.hpp"
#include "topoloss/metrics.hpp"
#include "topoloss/rips.hpp"
#include "topoloss/synth.hpp"
#include "topoloss/train.hpp"
