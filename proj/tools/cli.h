// tools/cli.h

// Copyright 2026 The artikit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ARTIKIT_TOOLS_CLI_H_
#define ARTIKIT_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace artikit::cli {

/// Runs the artikit command line with args[0] as the program name and
/// returns the process exit code: 0 success, 2 configuration error, 3 data
/// error, 4 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace artikit::cli

#endif  // ARTIKIT_TOOLS_CLI_H_
