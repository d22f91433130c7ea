#pragma once

#include <map>
#include <string>

#include "photodev/model.hpp"

namespace photodev {

// Integer weights w_k per channel label; unlisted channels weigh 0. Defines
// the counting variable N(t) = sum_k w_k N_k(t) over the bath's channels.
struct CountingSpec {
    BathId bath{};
    std::map<std::string, int> weights;

    int weight(const std::string& label) const {
        auto it = weights.find(label);
        return it == weights.end() ? 0 : it->second;
    }
};

}  // namespace photodev
