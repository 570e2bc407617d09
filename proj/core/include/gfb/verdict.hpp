#pragma once

namespace gfb {

enum class Verdict { Stable, Semistable, Unstable };

// Per-witness contribution in the k-stability branching.
enum class Contribution { Positive, StrictlySemistable, Violating };

const char* to_string(Verdict v);
const char* to_string(Contribution c);

// Worst-of combination; Unstable absorbs.
Verdict combine(Verdict a, Verdict b);

}  // namespace gfb
