#pragma once

#include <string>
#include <string_view>

namespace qrl {

enum class AlgoKind { ppo, sac };

std::string_view to_string(AlgoKind k);
AlgoKind algo_kind_from_string(std::string_view s);  // throws std::invalid_argument

}  // namespace qrl
