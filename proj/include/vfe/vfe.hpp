#ifndef VFE_VFE_HPP
#define VFE_VFE_HPP

#include "vfe/acceptance.hpp"
#include "vfe/config.hpp"
#include "vfe/dynamics.hpp"
#include "vfe/errors.hpp"
#include "vfe/filament.hpp"
#include "vfe/frames.hpp"
#include "vfe/generators.hpp"
#include "vfe/hasimoto.hpp"
#include "vfe/holonomy.hpp"
#include "vfe/run.hpp"
#include "vfe/space_form.hpp"
#include "vfe/spectral.hpp"
#include "vfe/timeseries.hpp"
#include "vfe/vec.hpp"

#endif
