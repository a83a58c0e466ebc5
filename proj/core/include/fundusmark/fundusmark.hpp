#pragma once

#include "fundusmark/anatomy.hpp"
#include "fundusmark/corners.hpp"
#include "fundusmark/errors.hpp"
#include "fundusmark/image_io.hpp"
#include "fundusmark/metrics.hpp"
#include "fundusmark/phantom.hpp"
#include "fundusmark/preprocess.hpp"
#include "fundusmark/raster.hpp"
#include "fundusmark/sidecar.hpp"
#include "fundusmark/stego.hpp"
#include "fundusmark/wavelet.hpp"
