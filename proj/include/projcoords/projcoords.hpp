#pragma once

#include "projcoords/errors.hpp"
#include "projcoords/spectral.hpp"
#include "projcoords/pants_coords.hpp"
#include "projcoords/flag_oracle.hpp"
#include "projcoords/surface.hpp"
#include "projcoords/coordinate_file.hpp"
#include "projcoords/render_svg.hpp"
