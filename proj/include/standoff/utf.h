// Copyright 2026 The Standoff Authors.
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

#ifndef STANDOFF_UTF_H_
#define STANDOFF_UTF_H_

#include <string>
#include <string_view>

namespace standoff {

// All character offsets in this library count Unicode code points, so text
// is held as UTF-32 internally and converted at I/O boundaries.
std::u32string Utf8ToUtf32(std::string_view utf8);
std::string Utf32ToUtf8(std::u32string_view text);
void AppendUtf8(char32_t c, std::string* out);

// Number of code points in a UTF-8 string.
size_t Utf8Length(std::string_view utf8);

bool IsWhitespace(char32_t c);

}  // namespace standoff

#endif  // STANDOFF_UTF_H_
