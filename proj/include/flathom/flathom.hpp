#pragma once

#include "flathom/error.hpp"
#include "flathom/linalg.hpp"
#include "flathom/form.hpp"
#include "flathom/affine.hpp"
#include "flathom/holonomy.hpp"
#include "flathom/centralizer.hpp"
#include "flathom/certify.hpp"
#include "flathom/search.hpp"
#include "flathom/io.hpp"
