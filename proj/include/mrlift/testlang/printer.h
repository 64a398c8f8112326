// Copyright 2026 The mrlift Authors
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

#ifndef MRLIFT_TESTLANG_PRINTER_H_
#define MRLIFT_TESTLANG_PRINTER_H_

#include <string>

#include "mrlift/testlang/ast.h"

namespace mrlift::testlang {

// Canonical MTL formatting: 4-space indentation, one statement per line,
// annotations as a prefix on the same line, minimal parentheses. Functions
// are printed before tests, items separated by one blank line.
std::string PrintProgram(const Program& program);
std::string PrintFunction(const FuncDef& fn);
std::string PrintTest(const TestDef& test);

// Statements of `block`, each on its own line at `indent` levels.
std::string PrintStatements(const Block& block, int indent = 0);
std::string PrintStmt(const Stmt& stmt, int indent = 0);
std::string PrintExpr(const Expr& expr);
std::string PrintType(const TypeAnn& type);

// Shortest round-tripping decimal form, always containing '.' or an exponent.
std::string FormatFloat(double value);

}  // namespace mrlift::testlang

#endif  // MRLIFT_TESTLANG_PRINTER_H_
