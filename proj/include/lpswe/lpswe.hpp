#pragma once

#include "lpswe/acoustic_step.hpp"
#include "lpswe/boundary.hpp"
#include "lpswe/driver.hpp"
#include "lpswe/error.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/flux_kernels.hpp"
#include "lpswe/io.hpp"
#include "lpswe/mesh.hpp"
#include "lpswe/reference1d.hpp"
#include "lpswe/scenarios.hpp"
#include "lpswe/transport_step.hpp"
#include "lpswe/vec2.hpp"
