#pragma once

namespace mkdv {

struct AiryValue {
    double s;
    double Ai;
    double Aip;  // Ai'(s)
};

// Ai and Ai' on the supported range [-20, 20], accurate to ~1e-10 absolute.
// Maclaurin series (long double) up to |s| = 7, asymptotic expansions beyond;
// the switch point is validated against the series in the overlap zone.
AiryValue airy_ai(double s);

}  // namespace mkdv
