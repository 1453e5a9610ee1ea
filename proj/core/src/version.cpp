// SPDX-License-Identifier: Apache-2.0
#include "saccade/version.hpp"

namespace saccade {

const char* version() { return SACCADE_VERSION_STRING; }

}  // namespace saccade
