#include "incomedist/params_io.hpp"

namespace incomedist {

EffectiveParams read_effective(const KeyValueConfig& cfg) {
  EffectiveParams p;
  p.T = cfg.get_double("T");
  p.T1 = cfg.get_double("T1", p.T);
  p.m0 = cfg.get_double("m0");
  p.m1 = cfg.get_double("m1", kInfinity);
  p.alpha = cfg.get_double("alpha");
  p.alpha1 = cfg.get_double("alpha1", p.alpha);
  p.m_init = cfg.get_double("m_init", 0.0);
  return p;
}

void write_effective(KeyValueConfig& cfg, const EffectiveParams& p) {
  cfg.set("T", p.T);
  cfg.set("T1", p.T1);
  cfg.set("m0", p.m0);
  cfg.set("m1", p.m1);
  cfg.set("alpha", p.alpha);
  cfg.set("alpha1", p.alpha1);
  cfg.set("m_init", p.m_init);
}

MicroParams read_micro(const KeyValueConfig& cfg) {
  if (!cfg.has("A0")) return micro_from_effective(read_effective(cfg), cfg.get_double("b", 1.0));
  MicroParams p;
  p.A0 = cfg.get_double("A0");
  p.A0p = cfg.get_double("A0p", p.A0);
  p.a = cfg.get_double("a");
  p.ap = cfg.get_double("ap", p.a);
  p.B0 = cfg.get_double("B0");
  p.b = cfg.get_double("b");
  p.m1 = cfg.get_double("m1", kInfinity);
  p.m_init = cfg.get_double("m_init", 0.0);
  return p;
}

void write_micro(KeyValueConfig& cfg, const MicroParams& p) {
  cfg.set("A0", p.A0);
  cfg.set("A0p", p.A0p);
  cfg.set("a", p.a);
  cfg.set("ap", p.ap);
  cfg.set("B0", p.B0);
  cfg.set("b", p.b);
  cfg.set("m1", p.m1);
  cfg.set("m_init", p.m_init);
}

}  // namespace incomedist
