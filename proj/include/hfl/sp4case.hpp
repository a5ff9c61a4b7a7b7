#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hfl/classical.hpp"
#include "hfl/cliffordorbit.hpp"

namespace hfl {

/// Sp4 over O_2 = Z/p^2 and its residue group Sp4(F_p) with the Siegel data.
struct Sp4Context {
    std::uint32_t p = 0;
    /// Generators and distinguished elements over Z/p^2 and mod p.
    Sp4Generators lifted, residue;
    /// Sp4(F_p); null when not enumerated.
    GroupPtr G;
    GroupPtr L, U, V, D, Uprime, Vprime;
    /// Symplectic monomial matrices mod p, i.e. N(D) with N(D)/D the Weyl group; and N(D) in L.
    GroupPtr N, NL;
    LieSpace g, l, d;
    /// Build-time certification of the forms, orders, triples and Weyl group.
    Report certificate;
};

/// p odd.  The residue group is enumerated when `enumerate_group` (default: p == 3).
Sp4Context build_sp4(std::uint32_t p, std::optional<bool> enumerate_group = std::nullopt);

/// diag(x, -x^t).
ZmodMatrix levi_point(const ZmodMatrix& x);
/// Upper-left 2x2 block.
ZmodMatrix top_left(const ZmodMatrix& m);

struct OrbitCase {
    std::string label;
    ZmodMatrix x, y;
};

/// Labels 1A 1B 2A 2A* 2B 3A 3B 4A 4B whose defining conditions x satisfies (exactly one in practice).
std::vector<std::string> matching_labels(const ZmodMatrix& x);
OrbitCase classify(const ZmodMatrix& x);
/// One normal-form representative per GL2(F_p)-class of M2(F_p).
std::vector<OrbitCase> enumerate_cases(std::uint32_t p);
/// Totality, class invariance and normal-form coverage over all of M2(F_p).
Report classification_report(std::uint32_t p);

/// Centralizers of a point y of sp4(F_p) in the residue groups.
struct PointData {
    ZmodMatrix y;
    GroupPtr G, L, U, V, Uprime, Vprime;
};
PointData point_data(const Sp4Context& c, const ZmodMatrix& y);
/// Only L(y), U'(y), V'(y).
PointData levi_point_data(const Sp4Context& c, const ZmodMatrix& y);

struct Transporter {
    std::string name;
    ZmodMatrix g;
    /// g.y, a point of l.
    ZmodMatrix image;
    /// |L g G(y)|.
    std::size_t size = 0;
};

/// L \ G(y, l) / G(y) with |G(y, l)|.
struct TransporterSet {
    std::vector<Transporter> cosets;
    std::size_t transporter_size = 0;
};
TransporterSet transporter_double_cosets(const Sp4Context& c, const PointData& y);

/// Known double coset representatives for the case, as words in s, t, w.
std::vector<Transporter> expected_transporters(const Sp4Context& c, const OrbitCase& oc);

/// Orders |G(y)|, |L(y)|, |U(y)|, |V(y)| for the case label at residue size q.
std::vector<std::size_t> expected_centralizer_orders(const std::string& label, std::uint64_t q);

Report centralizer_report(const Sp4Context& c, const OrbitCase& oc);

/// pres Ad_g pind on centralizers against Delta(g.y, y) + Delta(g.y, s.y) Ad_s + Xi(g.y, y), per irreducible.
Report verify_reduced_mackey(const Sp4Context& c, const OrbitCase& oc, const Transporter& g);

/// pind_{U(y),V(y)} against pind_{V(y)} (U0 trivial) for every case with enumerable G(y) among `labels`
/// (all labels when empty).
Report dat_compare(const Sp4Context& c, const std::vector<std::string>& labels = {});

/// Every check: contexts, classification, centralizers, reduced Mackey and the parahoric comparison at
/// p = 3, plus case 2A at p = 5.
Report sp4_report(bool with_p5 = true);

}  // namespace hfl
