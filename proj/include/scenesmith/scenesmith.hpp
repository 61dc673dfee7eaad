#pragma once

// Umbrella header for the scene generation library.

#include "scenesmith/catalog.hpp"
#include "scenesmith/cli.hpp"
#include "scenesmith/dress.hpp"
#include "scenesmith/enums.hpp"
#include "scenesmith/errors.hpp"
#include "scenesmith/furnish.hpp"
#include "scenesmith/geometry.hpp"
#include "scenesmith/json_util.hpp"
#include "scenesmith/layout.hpp"
#include "scenesmith/physicalize.hpp"
#include "scenesmith/pipeline.hpp"
#include "scenesmith/rng.hpp"
#include "scenesmith/scenefile.hpp"
#include "scenesmith/taskgen.hpp"
