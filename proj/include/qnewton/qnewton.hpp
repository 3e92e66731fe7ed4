// Copyright 2026 qnewton contributors
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

#ifndef QNEWTON_QNEWTON_HPP
#define QNEWTON_QNEWTON_HPP

#include "qnewton/arithmetic.hpp"
#include "qnewton/common.hpp"
#include "qnewton/complex_matrix.hpp"
#include "qnewton/eigen.hpp"
#include "qnewton/fixed_point.hpp"
#include "qnewton/model_qlss.hpp"
#include "qnewton/pde.hpp"
#include "qnewton/qlss.hpp"
#include "qnewton/resources.hpp"
#include "qnewton/solvers.hpp"
#include "qnewton/statevector.hpp"

#endif
