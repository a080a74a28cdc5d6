/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SLQ_COMMANDS_HPP
#define SLQ_COMMANDS_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "slq/config.hpp"

namespace slq
{

/// Exit codes of the command-line front-end.
enum ExitCode : int { exit_ok = 0, exit_verify_failed = 1, exit_config = 2, exit_solver = 3 };

inline const std::vector<std::string> &all_suites()
{
    static const std::vector<std::string> s{"chains", "oscillation", "derivatives", "mollify", "jumps", "transmission"};
    return s;
}

/// Fixed 17-significant-digit formatting used in every CSV.
std::string csv_number(double v);

std::optional<Region> parse_region(const std::string &name);

/// CSV n,lambda,multiplicity,residual,zeros. With samples > 0 each
/// eigenfunction is also written to `<sample_prefix><n>.csv`.
int cmd_solve(const ProblemConfig &cfg, std::ostream &out, int samples = 0, const std::string &sample_prefix = {});

/// Writes suite,check,status,detail rows to `out` and a readable log to
/// `log`. Returns exit_ok iff every check passes.
int cmd_verify(const ProblemConfig &cfg, const std::vector<std::string> &suites, std::ostream &out,
               std::ostream &log);

/// CSV tables for cfg.scan.
int cmd_scan(const ProblemConfig &cfg, std::ostream &out);

} // namespace slq

#endif
