#pragma once

#include "hflow/linalg.hpp"
#include "hflow/lie_core.hpp"
#include "hflow/exterior.hpp"
#include "hflow/structures.hpp"
#include "hflow/flows.hpp"
#include "hflow/dynamics.hpp"
#include "hflow/catalog.hpp"
#include "hflow/io.hpp"
