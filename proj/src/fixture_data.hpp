#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace flowcat::app {

// File name and contents of every fixtures/*.json file, generated at configure time.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_fixtures();

}  // namespace flowcat::app
