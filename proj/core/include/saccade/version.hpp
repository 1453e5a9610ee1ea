// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace saccade {

/// Library version, e.g. "0.3.0".
const char* version();

}  // namespace saccade
