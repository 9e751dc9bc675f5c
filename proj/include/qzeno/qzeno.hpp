// Copyright 2026 The qzeno Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qzeno/algebra.hpp"
#include "qzeno/approx.hpp"
#include "qzeno/averaged.hpp"
#include "qzeno/cli.hpp"
#include "qzeno/format.hpp"
#include "qzeno/gamma_time.hpp"
#include "qzeno/generator.hpp"
#include "qzeno/matrix_functions.hpp"
#include "qzeno/quadrature.hpp"
