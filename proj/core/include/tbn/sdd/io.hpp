#pragma once

#include <iosfwd>

#include "tbn/sdd/manager.hpp"
#include "tbn/sdd/vtree.hpp"

namespace tbn::sdd {

// Vtree text format:
//   c <comment>
//   vtree <node count>
//   L <id> <var>
//   I <id> <left id> <right id>
// Ids are the in-order vtree node ids; children are listed before parents.
void save_vtree(std::ostream& out, const Vtree& vtree);
Vtree load_vtree(std::istream& in);

// SDD text format:
//   c <comment>
//   sdd <node count>
//   F <id> | T <id>
//   L <id> <vtree id> <signed literal>
//   D <id> <vtree id> <k> <prime id> <sub id> ... (k pairs)
// Ids are local to the file; children are listed before parents and the last
// line is the root. Output is canonical: equal functions over equal vtrees
// produce identical files regardless of manager history.
void save_sdd(std::ostream& out, const SddManager& m, const Sdd& root);
// Throws ParseError (with line number) on malformed input or decision nodes
// whose primes do not form a partition.
Sdd load_sdd(std::istream& in, SddManager& m);

}  // namespace tbn::sdd
