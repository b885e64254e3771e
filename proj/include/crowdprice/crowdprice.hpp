#pragma once

#include "crowdprice/analysis.hpp"
#include "crowdprice/bonus.hpp"
#include "crowdprice/common.hpp"
#include "crowdprice/cp_solver.hpp"
#include "crowdprice/io.hpp"
#include "crowdprice/lp2d.hpp"
#include "crowdprice/pp_solver.hpp"
#include "crowdprice/scenario.hpp"
#include "crowdprice/utility.hpp"
#include "crowdprice/worker.hpp"
