// Copyright 2026 lanstyle authors
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

#include <string>

#include "lanstyle/nn/core.h"
#include "lanstyle/text/inventory.h"

namespace lanstyle {

// Writes one CSV row per phoneme id: symbol, language tag, then the
// embedding row. Values use %.9g so float32 entries round-trip exactly.
void export_embeddings(const Mat<float>& table,
                       const PhonemeInventory& inventory,
                       const std::string& out_path);

}  // namespace lanstyle
