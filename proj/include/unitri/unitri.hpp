#pragma once

// Umbrella header.

#include "unitri/error.hpp"
#include "unitri/field.hpp"
#include "unitri/cyclo.hpp"
#include "unitri/matrix.hpp"
#include "unitri/roots.hpp"
#include "unitri/packed.hpp"
#include "unitri/orbits.hpp"
#include "unitri/classes.hpp"
#include "unitri/parallel.hpp"
#include "unitri/characters.hpp"
#include "unitri/serialize.hpp"
#include "unitri/verify.hpp"
