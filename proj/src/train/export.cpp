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

#include "lanstyle/train/export.h"

#include <cstdio>
#include <fstream>

#include "lanstyle/common/errors.h"

namespace lanstyle {

void export_embeddings(const Mat<float>& table,
                       const PhonemeInventory& inventory,
                       const std::string& out_path) {
  if (table.rows() != inventory.size()) {
    throw ShapeMismatchError("embedding rows != phoneme vocabulary");
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + out_path);
  out << "symbol,language_tag";
  for (Eigen::Index j = 0; j < table.cols(); ++j) out << ",e" << j;
  out << "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    out << inventory.symbol_of(static_cast<int>(i)) << ','
        << to_string(inventory.tag_of(static_cast<int>(i)));
    for (Eigen::Index j = 0; j < table.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), ",%.9g",
                    static_cast<double>(table(i, j)));
      out << buf;
    }
    out << "\n";
  }
  if (!out.good()) throw IoError("failed while writing " + out_path);
}

}  // namespace lanstyle
