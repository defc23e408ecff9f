#pragma once

#include "boolean_function.hpp"
#include "decoder.hpp"
#include "errors.hpp"
#include "genavg.hpp"
#include "gf2.hpp"
#include "gowers.hpp"
#include "hom.hpp"
#include "parallel.hpp"
#include "rm2.hpp"
#include "rng.hpp"
#include "testers.hpp"
