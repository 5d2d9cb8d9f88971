#pragma once

#include "slpra/access.hpp"
#include "slpra/approx_match.hpp"
#include "slpra/error.hpp"
#include "slpra/heavy_path.hpp"
#include "slpra/ibst.hpp"
#include "slpra/random_slp.hpp"
#include "slpra/repair.hpp"
#include "slpra/rmq.hpp"
#include "slpra/slp.hpp"
#include "slpra/substring.hpp"
#include "slpra/text.hpp"
#include "slpra/verify.hpp"
#include "slpra/weighted_ancestor.hpp"
