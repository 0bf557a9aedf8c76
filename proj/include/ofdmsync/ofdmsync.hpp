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

#ifndef OFDMSYNC_OFDMSYNC_HPP
#define OFDMSYNC_OFDMSYNC_HPP

#include "ofdmsync/cfo.hpp"
#include "ofdmsync/channel.hpp"
#include "ofdmsync/correlator.hpp"
#include "ofdmsync/dft.hpp"
#include "ofdmsync/frame_detect.hpp"
#include "ofdmsync/harness.hpp"
#include "ofdmsync/io.hpp"
#include "ofdmsync/preamble.hpp"
#include "ofdmsync/report.hpp"
#include "ofdmsync/stats.hpp"
#include "ofdmsync/time_sync.hpp"
#include "ofdmsync/types.hpp"

#endif
