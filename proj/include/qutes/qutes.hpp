// Copyright 2026 The Qutes C++ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qutes/ast.hpp"
#include "qutes/builtins.hpp"
#include "qutes/diag.hpp"
#include "qutes/driver.hpp"
#include "qutes/lexer.hpp"
#include "qutes/parser.hpp"
#include "qutes/printer.hpp"
#include "qutes/qasm.hpp"
#include "qutes/qir.hpp"
#include "qutes/runtime.hpp"
#include "qutes/sema.hpp"
#include "qutes/simulator.hpp"
#include "qutes/symbols.hpp"
#include "qutes/token.hpp"
#include "qutes/types.hpp"
