#pragma once

#include "malvis/aggregate.hpp"
#include "malvis/cam.hpp"
#include "malvis/error.hpp"
#include "malvis/exchange.hpp"
#include "malvis/imagegen.hpp"
#include "malvis/io.hpp"
#include "malvis/manifest.hpp"
#include "malvis/masking.hpp"
#include "malvis/metrics.hpp"
#include "malvis/npy.hpp"
#include "malvis/png_io.hpp"
#include "malvis/refnet.hpp"
#include "malvis/refnet_io.hpp"
#include "malvis/tensor.hpp"
