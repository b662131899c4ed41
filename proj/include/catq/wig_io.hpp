#pragma once

#include "catq/phasespace.hpp"

#include <string>

namespace catq {

// Binary layout: the five ASCII bytes "WIGv1", then little-endian
// u32 nq, u32 np, f64 qmin, qmax, pmin, pmax and nq * np f64 values with q
// as the outer (slow) index.
inline constexpr char kWigMagic[] = "WIGv1";

void write_wig(const std::string& path, const WignerGrid& w);
WignerGrid read_wig(const std::string& path);

// Long-format CSV: q, p, W.
void write_wig_csv(const std::string& path, const WignerGrid& w);

}  // namespace catq
