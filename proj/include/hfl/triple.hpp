#pragma once

#include <string>
#include <vector>

#include "hfl/group.hpp"

namespace hfl {

/// (U, L, V) inside G with L normalizing U and V and U x L x V -> G injective.
/// `actual` when the product map is onto; K is a normal witness on which it is bijective.
struct IwahoriTriple {
    GroupPtr G, U, L, V, K;
    bool actual = false;
    std::string name;
};

class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Number of distinct products u*l*v.
std::size_t triple_product_count(const FiniteGroup& u, const FiniteGroup& l, const FiniteGroup& v);

/// Verifies every condition and throws CertificationError listing all failures.
IwahoriTriple certify_iwahori(GroupPtr U, GroupPtr L, GroupPtr V, GroupPtr G, GroupPtr K = nullptr,
                              std::string name = {});

/// Same triple with U and V exchanged.
IwahoriTriple swapped(const IwahoriTriple& t);

}  // namespace hfl
