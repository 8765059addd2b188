// Copyright 2026 The Authors.
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

// The fairspread command line: solve, evaluate, pof, gen, bench.

#ifndef FAIRSPREAD_CLI_H_
#define FAIRSPREAD_CLI_H_

#include <iosfwd>

namespace fairspread {

// Exit codes: 0 success, 1 internal failure, 2 argument error, 3 input
// validation or parse error. Every flag can also be set through the
// environment as FAIRSPREAD_<FLAG>, e.g. FAIRSPREAD_K=10 or
// FAIRSPREAD_FW_ITERS=20; explicit flags win.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace fairspread

#endif  // FAIRSPREAD_CLI_H_
