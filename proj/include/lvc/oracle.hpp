#pragma once

#include "lvc/types.hpp"

namespace lvc {

/// Reference implementation of query-attention compression (single- and
/// multi-head) using plain loops and double precision end to end. Ground
/// truth for parity tests; not meant to be fast.
PseudoFrames oracle_compress(const VideoFeatures& v, const QueryEmbedding& q,
                             const CompressionConfig& cfg);

}  // namespace lvc
