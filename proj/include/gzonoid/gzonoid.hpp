// Copyright 2026 The gzonoid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GZONOID_GZONOID_HPP
#define GZONOID_GZONOID_HPP

// Umbrella header.

#include "gzonoid/errors.hpp"
#include "gzonoid/grf_concentration.hpp"
#include "gzonoid/monte_carlo.hpp"
#include "gzonoid/quadrature.hpp"
#include "gzonoid/random_determinant.hpp"
#include "gzonoid/rng.hpp"
#include "gzonoid/scalar_kernels.hpp"
#include "gzonoid/zonoid_geometry.hpp"

#endif  // GZONOID_GZONOID_HPP
