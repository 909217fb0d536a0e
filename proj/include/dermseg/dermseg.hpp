/* Copyright 2026 The dermseg Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DERMSEG_DERMSEG_HPP_
#define DERMSEG_DERMSEG_HPP_

#include "dermseg/arch.hpp"
#include "dermseg/augment.hpp"
#include "dermseg/augment_log.hpp"
#include "dermseg/config.hpp"
#include "dermseg/error.hpp"
#include "dermseg/filters.hpp"
#include "dermseg/geometry.hpp"
#include "dermseg/losses.hpp"
#include "dermseg/manifest.hpp"
#include "dermseg/metrics.hpp"
#include "dermseg/morphology.hpp"
#include "dermseg/parallel.hpp"
#include "dermseg/png_io.hpp"
#include "dermseg/postprocess.hpp"
#include "dermseg/predictors.hpp"
#include "dermseg/preprocess.hpp"
#include "dermseg/raster.hpp"
#include "dermseg/rng.hpp"
#include "dermseg/tta.hpp"

#endif  // DERMSEG_DERMSEG_HPP_
