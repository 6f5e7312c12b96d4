#pragma once

#include "lfdyn/attractor.hpp"
#include "lfdyn/errors.hpp"
#include "lfdyn/expansion.hpp"
#include "lfdyn/mobius.hpp"
#include "lfdyn/spectral.hpp"
