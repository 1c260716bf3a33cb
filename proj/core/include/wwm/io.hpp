#ifndef WWM_IO_HPP
#define WWM_IO_HPP

#include <iosfwd>
#include <string>

#include "wwm/presentation.hpp"
#include "wwm/weights.hpp"

namespace wwm {

// Presentation text format.  Letter form (m <= 26):
//     m 2
//     abAB        # one relator per line, a..z generators, A..Z inverses
// Numeric form (any m):
//     m! 40
//     1,2,-1,-2
// '#' starts a comment, blank lines are skipped.  parse accepts either form;
// format emits letters when m <= 26, numeric otherwise.
Presentation parse_presentation(std::istream& in);
Presentation parse_presentation_file(const std::string& path);
std::string format_presentation(const Presentation& p);

// Weight vector JSON:
//   {"m": 2, "weights": ["1/4", "1/4"], "normalized": true}
// Entries are exact rationals as "p/q" (or integer) strings.  A "normalized"
// claim is verified exactly on parse; mismatch is an input error.
WeightVector parse_weights(std::istream& in);
WeightVector parse_weights_file(const std::string& path);
std::string format_weights(const WeightVector& w);

}  // namespace wwm

#endif
