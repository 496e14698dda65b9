#ifndef STORYLINE_GENERATE_HPP
#define STORYLINE_GENERATE_HPP

#include <cstdint>

#include "storyline/instance.hpp"

namespace storyline {

struct generator_params {
    int chars = 6;
    int layers = 8;
    int min_interactions = 1;  ///< per layer
    int max_interactions = 2;
    int min_size = 1;  ///< characters per interaction
    int max_size = 3;
    /// Probability that a layer repeats the previous layer's interactions.
    double repeat = 0.0;
};

/// Random instance, identical for identical (params, seed). Every
/// character takes part in at least one interaction. Throws
/// std::invalid_argument for impossible parameters.
instance generate_instance(const generator_params &params, std::uint64_t seed);

}  // namespace storyline

#endif  // STORYLINE_GENERATE_HPP
