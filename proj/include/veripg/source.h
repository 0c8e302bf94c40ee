// Copyright 2026 The VeriPG Authors
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

#include <cstddef>
#include <string>
#include <vector>

namespace veripg {

/// Source text plus a line index for byte-offset to line lookups.
class SourceFile {
 public:
  SourceFile(std::string path, std::string text);

  /// Reads `path` from disk. Throws veripg::Error if unreadable.
  static SourceFile load(const std::string& path);

  const std::string& path() const { return path_; }
  const std::string& text() const { return text_; }

  /// Byte offsets of the first character of each line. line_index()[0] == 0.
  const std::vector<size_t>& line_index() const { return line_index_; }

  /// 1-based line containing `offset`. Offsets past the end map to the last
  /// line.
  int line_of(size_t offset) const;

  int line_count() const { return static_cast<int>(line_index_.size()); }

 private:
  std::string path_;
  std::string text_;
  std::vector<size_t> line_index_;
};

}  // namespace veripg
