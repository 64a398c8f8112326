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

#ifndef MRLIFT_RUNTIME_REGISTRY_H_
#define MRLIFT_RUNTIME_REGISTRY_H_

#include <memory>
#include <string_view>

#include "mrlift/testlang/ast.h"
#include "mrlift/testlang/checker.h"

namespace mrlift::runtime {

// The system under test: an immutable set of functions reachable from test
// code as `sut.<name>`. Functions inside the registry call each other by
// plain name. Copies share the underlying program.
class SutRegistry {
 public:
  SutRegistry() : program_(std::make_shared<testlang::Program>()) {}
  explicit SutRegistry(testlang::Program program);

  const testlang::FuncDef* Find(std::string_view name) const {
    return program_->FindFunction(name);
  }
  const testlang::Program& program() const { return *program_; }
  const testlang::SutSignatures& signatures() const { return signatures_; }

 private:
  std::shared_ptr<const testlang::Program> program_;
  testlang::SutSignatures signatures_;
};

}  // namespace mrlift::runtime

#endif  // MRLIFT_RUNTIME_REGISTRY_H_
