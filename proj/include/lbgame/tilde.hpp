#pragma once

#include "lbgame/checks.hpp"
#include "lbgame/deviation_graph.hpp"
#include "lbgame/node_set.hpp"
#include "lbgame/ratio.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace lbg {

/// One in-arc chosen per node. Node indices refer to a DeviationGraph.
struct TildeArcSet {
    /// pred[v] = tail of the chosen arc into v.
    std::vector<int> pred;

    [[nodiscard]] int size() const { return static_cast<int>(pred.size()); }
    /// Tilde successors of u.
    [[nodiscard]] NodeSet out(int u) const;
    [[nodiscard]] NodeSet out(NodeSet s) const;
    /// b_u = number of chosen arcs leaving u.
    [[nodiscard]] int out_count(int u) const { return out(u).size(); }
    /// Arcs as (u, v) pairs in lexicographic order.
    [[nodiscard]] std::vector<std::pair<int, int>> arcs() const;
    /// True iff pred[v] is an in-neighbour of v in `graph` for every node.
    [[nodiscard]] bool valid_for(const DeviationGraph& graph) const;

    friend bool operator==(const TildeArcSet&, const TildeArcSet&) = default;
};

/// Arc-set order used for tie-breaking: lexicographic on sorted arc lists.
bool arc_set_less(const TildeArcSet& a, const TildeArcSet& b);

/// Visits the Cartesian product of in-arc choices (last node varies fastest).
/// Throws InputError if some node has no in-arc, CapExceeded if the product of
/// in-degrees exceeds `cap`.
void for_each_tilde_set(const DeviationGraph& graph, std::uint64_t cap,
                        const std::function<void(const TildeArcSet&)>& visit);
std::vector<TildeArcSet> enumerate_tilde_sets(const DeviationGraph& graph, std::uint64_t cap = 1'000'000);

/// Directed 2-path (i, i1, j) of tilde arcs, as in the Pi structure.
struct TwoPath {
    int start;
    int middle;
    int end;

    friend auto operator<=>(const TwoPath&, const TwoPath&) = default;
};

/// Lexicographic selection key (|W0|, |M_2^2|, |Omega|, |Pi|).
using SelectionKey = std::array<int, 4>;

/// Every set derived from a graph and a tilde-valid arc set.
struct TildeClassification {
    TildeArcSet tilde;
    std::vector<int> b;

    NodeSet W0;       // b_i = 0
    NodeSet W0tilde;  // Q+(W0) over all arcs
    NodeSet W1;       // nodes associated with W0 by alternating chains
    NodeSet W1tilde;  // tilde successors of W1
    NodeSet W;        // W0 | W1 | W1tilde

    /// (a, b) -> nodes with a_i = a and b_i = b.
    std::map<std::pair<int, int>, NodeSet> m_ab;

    NodeSet X;          // M_2^2 | M_3^3
    NodeSet M22tilde;   // M_2^2 nodes whose tilde successors leave W
    NodeSet Z1, Z2, Z;  // outside W: b = 1 / b > 1, a > b+1 / b > 1, a = b+1
    /// ell1[l] for l in M22tilde \ X3: its unique tilde successor outside W.
    std::map<int, int> ell1;
    NodeSet X11;
    std::array<NodeSet, 7> Xt;  // Xt[1..6]; Xt[0] unused

    NodeSet Omega;
    std::vector<TwoPath> Pi;

    /// companies[l] for l in X6: nodes of M \ X that are companies of l.
    std::map<int, NodeSet> companies;
    std::array<NodeSet, 7> Yt;  // Yt[1..6]

    [[nodiscard]] NodeSet M(int a, int bb) const;
    [[nodiscard]] SelectionKey key() const;
};

/// Derives every auxiliary set. Throws InputError if `tilde` is not valid for
/// `graph`.
TildeClassification classify(const DeviationGraph& graph, const TildeArcSet& tilde);

/// Exhaustive choice of a tilde-valid set minimizing the selection key, with
/// ties broken by arc_set_less.
TildeClassification select_tilde(const DeviationGraph& graph, std::uint64_t cap = 1'000'000);

/// H_i: in-neighbours h of i with in-degree > 1 or (h, i) not chosen.
NodeSet omega_swap_candidates(const DeviationGraph& graph, const TildeArcSet& tilde, int i);
/// Replaces the chosen in-arc of i by (h, i).
TildeArcSet swap_in_arc(const TildeArcSet& tilde, int i, int h);

/// Whether the source deviation minimizes the selection key among the
/// minimal deviations of its equilibrium. The company rule depends on it.
enum class KeyMinimum { Attained, NotAttained, Unknown };

struct XYBound {
    int t;
    int x_size;
    Ratio coefficient;  // |X_t| <= coefficient * |Y_t|
    int y_size;
    CheckStatus status;
};

struct InequalityReport {
    Ratio r_measured;
    /// sum b_i L_i / sum L_i.
    Ratio eq7_rhs;
    /// Upper bound on eq7_rhs after pushing loads to their extremes.
    Ratio chain_bound;
    Ratio eq8_lhs;
    Ratio eq8_rhs;
    std::vector<XYBound> xy_bounds;
    bool disjointness_pass = false;
    std::map<int, int> company_witnesses;
    CheckList checks;

    [[nodiscard]] bool passed() const { return checks.passed(); }
};

/// Evaluates the counting identities, the bound chain from measured ratio to
/// 5/4, the six X/Y bounds and Y-set disjointness.
InequalityReport verify_inequalities(const DeviationGraph& graph, const TildeClassification& cls,
                                     const Ratio& measured_r, KeyMinimum key_minimum);

/// Throws VerificationFailure naming every failed check.
void require_passed(const CheckList& checks, const std::string& context);

} // namespace lbg
