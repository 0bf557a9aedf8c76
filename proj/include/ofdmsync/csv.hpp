// SPDX-License-Identifier: Apache-2.0
//
// ofdmsync: preamble-based OFDM synchronization laboratory
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OFDMSYNC_CSV_HPP
#define OFDMSYNC_CSV_HPP

#include <charconv>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>

namespace ofdmsync::csv {

// Shortest representation that parses back to the same double.
inline std::string num(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view text, double& out)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    if (text.empty())
        return false;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

template <typename... Fields>
void row(std::ostream& os, const Fields&... fields)
{
    bool first = true;
    auto emit = [&](const auto& f) {
        if (!first)
            os << ',';
        first = false;
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(f)>>)
            os << num(f);
        else
            os << f;
    };
    (emit(fields), ...);
    os << '\n';
}

} // namespace ofdmsync::csv

#endif
