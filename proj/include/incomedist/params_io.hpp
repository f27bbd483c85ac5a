#pragma once

#include "incomedist/keyvalue.hpp"
#include "incomedist/params.hpp"

namespace incomedist {

/// Keys: T, T1 (defaults to T), m0, m1 (defaults to inf), alpha, alpha1 (defaults to alpha), m_init.
EffectiveParams read_effective(const KeyValueConfig& cfg);
void write_effective(KeyValueConfig& cfg, const EffectiveParams& p);

/// Keys A0, A0p, a, ap, B0, b, m1, m_init; or the effective keys plus an optional gauge `b`.
MicroParams read_micro(const KeyValueConfig& cfg);
void write_micro(KeyValueConfig& cfg, const MicroParams& p);

}  // namespace incomedist
