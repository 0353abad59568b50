#pragma once

#include "imbalance/error.hpp"
#include "imbalance/exchange.hpp"
#include "imbalance/negotiation.hpp"
#include "imbalance/nonmarket.hpp"
#include "imbalance/power_graph.hpp"
#include "imbalance/quantity.hpp"
#include "imbalance/society.hpp"
#include "imbalance/supply_chain.hpp"
#include "imbalance/version.hpp"
