#include "lbgame/tilde.hpp"

#include "lbgame/errors.hpp"

#include <algorithm>
#include <sstream>

namespace lbg {

NodeSet TildeArcSet::out(int u) const
{
    NodeSet s;
    for (int v = 0; v < size(); ++v)
        if (pred[static_cast<std::size_t>(v)] == u)
            s.insert(v);
    return s;
}

NodeSet TildeArcSet::out(NodeSet s) const
{
    NodeSet acc;
    for (int v = 0; v < size(); ++v)
        if (s.contains(pred[static_cast<std::size_t>(v)]))
            acc.insert(v);
    return acc;
}

std::vector<std::pair<int, int>> TildeArcSet::arcs() const
{
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < size(); ++v)
        out.emplace_back(pred[static_cast<std::size_t>(v)], v);
    std::sort(out.begin(), out.end());
    return out;
}

bool TildeArcSet::valid_for(const DeviationGraph& graph) const
{
    if (size() != graph.size())
        return false;
    for (int v = 0; v < size(); ++v) {
        int u = pred[static_cast<std::size_t>(v)];
        if (u < 0 || u >= size() || !graph.has_arc(u, v))
            return false;
    }
    return true;
}

bool arc_set_less(const TildeArcSet& a, const TildeArcSet& b)
{
    return a.arcs() < b.arcs();
}

void for_each_tilde_set(const DeviationGraph& graph, std::uint64_t cap,
                        const std::function<void(const TildeArcSet&)>& visit)
{
    const int k = graph.size();
    std::vector<std::vector<int>> choices(static_cast<std::size_t>(k));
    std::uint64_t product = 1;
    for (int v = 0; v < k; ++v) {
        choices[static_cast<std::size_t>(v)] = graph.in(v).to_vector();
        auto d = static_cast<std::uint64_t>(graph.in_degree(v));
        if (d == 0)
            throw InputError("server " + std::to_string(graph.server(v) + 1) + " has no in-arc; no tilde-valid set");
        if (product > cap / d)
            throw CapExceeded("number of tilde-valid arc sets exceeds cap " + std::to_string(cap));
        product *= d;
    }

    std::vector<std::size_t> digit(static_cast<std::size_t>(k), 0);
    TildeArcSet t;
    t.pred.resize(static_cast<std::size_t>(k));
    for (;;) {
        for (std::size_t v = 0; v < digit.size(); ++v)
            t.pred[v] = choices[v][digit[v]];
        visit(t);
        int v = k - 1;
        for (; v >= 0; --v) {
            auto& d = digit[static_cast<std::size_t>(v)];
            if (++d < choices[static_cast<std::size_t>(v)].size())
                break;
            d = 0;
        }
        if (v < 0)
            break;
    }
}

std::vector<TildeArcSet> enumerate_tilde_sets(const DeviationGraph& graph, std::uint64_t cap)
{
    std::vector<TildeArcSet> out;
    for_each_tilde_set(graph, cap, [&](const TildeArcSet& t) { out.push_back(t); });
    return out;
}

NodeSet TildeClassification::M(int a, int bb) const
{
    auto it = m_ab.find({a, bb});
    return it == m_ab.end() ? NodeSet{} : it->second;
}

SelectionKey TildeClassification::key() const
{
    return {W0.size(), M(2, 2).size(), Omega.size(), static_cast<int>(Pi.size())};
}

TildeClassification classify(const DeviationGraph& g, const TildeArcSet& tilde)
{
    if (!tilde.valid_for(g))
        throw InputError("arc set is not tilde-valid for this graph");

    const int k = g.size();
    TildeClassification c;
    c.tilde = tilde;
    auto pred = [&](int v) { return tilde.pred[static_cast<std::size_t>(v)]; };
    auto b = [&](int i) { return c.b[static_cast<std::size_t>(i)]; };

    c.b.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        c.b[static_cast<std::size_t>(i)] = tilde.out_count(i);
        if (b(i) == 0)
            c.W0.insert(i);
        c.m_ab[{g.jobs_at(i), b(i)}].insert(i);
    }
    c.W0tilde = g.out(c.W0);

    // Association closure: tilde arc backwards, graph arc forwards.
    for (int j : c.W0tilde)
        c.W1.insert(pred(j));
    for (NodeSet frontier = c.W1; !frontier.empty();) {
        NodeSet next;
        for (int j : g.out(frontier))
            next.insert(pred(j));
        frontier = next - c.W1;
        c.W1 |= next;
    }
    c.W1tilde = tilde.out(c.W1);
    c.W = c.W0 | c.W1 | c.W1tilde;

    c.X = c.M(2, 2) | c.M(3, 3);
    for (int l : c.M(2, 2))
        if (!tilde.out(l).subset_of(c.W))
            c.M22tilde.insert(l);

    for (int i : g.all() - c.W) {
        int a = g.jobs_at(i);
        if (b(i) == 1)
            c.Z1.insert(i);
        else if (b(i) > 1 && a > b(i) + 1)
            c.Z2.insert(i);
        else if (b(i) > 1 && a == b(i) + 1)
            c.Z.insert(i);
    }

    auto& X = c.Xt;
    for (int i : c.M(3, 3))
        if (!tilde.out(i).subset_of(c.W))
            X[2].insert(i);
    for (int l : c.M22tilde) {
        NodeSet succ = tilde.out(l);
        if (succ.disjoint(c.W)) {
            X[3].insert(l);
            continue;
        }
        int l1 = (succ - c.W).front();
        c.ell1[l] = l1;
        if ((c.Z1 | c.Z2).contains(l1)) {
            X[4].insert(l);
        } else if (c.Z.contains(l1)) {
            if (g.out(l1).subset_of(c.W))
                c.X11.insert(l);
            else if (g.in_degree(l1) > 1)
                X[5].insert(l);
            else
                X[6].insert(l);
        }
    }
    for (int i : c.X)
        if (tilde.out(i).subset_of(c.W))
            X[1].insert(i);
    X[1] |= c.X11;

    // Interior node of an Omega 2-cycle or a Pi 2-path: one in-arc, and every
    // out-arc chosen, more than one of them.
    auto pinned = [&](int i1) { return g.in_degree(i1) == 1 && g.out_degree(i1) == b(i1) && b(i1) > 1; };
    for (int i : g.all_leave()) {
        int i1 = pred(i);
        if (pred(i1) == i && pinned(i1))
            c.Omega.insert(i);
    }
    for (auto [l, l1] : c.ell1) {
        if (!pinned(l1))
            continue;
        for (int j : tilde.out(l1))
            if (j != l && g.all_leave().contains(j))
                c.Pi.push_back({l, l1, j});
    }

    auto& Y = c.Yt;
    Y[1] = c.W1;
    for (int i : X[2])
        Y[2] |= tilde.out(i) - c.W;
    for (int l : X[3])
        Y[3] |= tilde.out(l);
    for (int l : X[4])
        Y[4] |= tilde.out(l) - c.W;
    for (int l : X[5])
        Y[5] |= g.in(c.ell1.at(l)) - NodeSet::single(l);
    for (int l : X[6]) {
        int l1 = c.ell1.at(l);
        NodeSet company;
        for (int j : (g.one_stays() - c.W) - c.X)
            if (j != l && pred(j) == l1)
                company.insert(j);
        c.companies[l] = company;
        Y[6] |= NodeSet::single(l1) | company;
    }
    return c;
}

TildeClassification select_tilde(const DeviationGraph& graph, std::uint64_t cap)
{
    std::optional<TildeClassification> best;
    for_each_tilde_set(graph, cap, [&](const TildeArcSet& t) {
        TildeClassification c = classify(graph, t);
        if (!best || c.key() < best->key() || (c.key() == best->key() && arc_set_less(t, best->tilde)))
            best = std::move(c);
    });
    return std::move(*best);
}

NodeSet omega_swap_candidates(const DeviationGraph& graph, const TildeArcSet& tilde, int i)
{
    NodeSet h;
    for (int u : graph.in(i))
        if (graph.in_degree(u) > 1 || tilde.pred[static_cast<std::size_t>(i)] != u)
            h.insert(u);
    return h;
}

TildeArcSet swap_in_arc(const TildeArcSet& tilde, int i, int h)
{
    TildeArcSet out = tilde;
    out.pred[static_cast<std::size_t>(i)] = h;
    return out;
}

namespace {

std::vector<ServerId> servers_of(const DeviationGraph& g, NodeSet s)
{
    std::vector<ServerId> out;
    for (int i : s)
        out.push_back(g.server(i));
    return out;
}

Witness nodes_witness(const DeviationGraph& g, NodeSet s, std::string note)
{
    return {servers_of(g, s), {}, std::move(note)};
}

} // namespace

InequalityReport verify_inequalities(const DeviationGraph& g, const TildeClassification& c,
                                     const Ratio& measured_r, KeyMinimum key_minimum)
{
    const int k = g.size();
    InequalityReport rep;
    CheckList& ck = rep.checks;
    rep.r_measured = measured_r;
    auto b = [&](int i) { return c.b[static_cast<std::size_t>(i)]; };

    ck.expect("one_in_arc_per_node", c.tilde.valid_for(g));
    int sum_b = 0;
    for (int i = 0; i < k; ++i)
        sum_b += b(i);
    ck.expect("sum_b_equals_node_count", sum_b == k, {{}, {}, "sum b_i = " + std::to_string(sum_b)});

    int count = 0;
    int weighted = 0;
    for (const auto& [ab, nodes] : c.m_ab) {
        count += nodes.size();
        weighted += ab.second * nodes.size();
    }
    ck.expect("counting_identities", count == k && weighted == k,
              {{}, {}, "sum m_ab = " + std::to_string(count) + ", sum b m_ab = " + std::to_string(weighted)});

    ck.expect("W0_nonempty", !c.W0.empty(), {{}, {}, "every node has a tilde out-arc"});
    NodeSet not_one;
    for (int i : c.W1)
        if (b(i) != 1)
            not_one.insert(i);
    ck.expect("b_is_1_on_W1", not_one.empty(), nodes_witness(g, not_one, "W1 nodes with b_i != 1"));
    NodeSet reach = g.out(c.W0 | c.W1);
    ck.expect("out_of_W0_W1_is_W1tilde", reach == c.W1tilde,
              nodes_witness(g, (reach - c.W1tilde) | (c.W1tilde - reach), "symmetric difference"));
    ck.expect("W1_matches_W1tilde", c.W1.size() == c.W1tilde.size() && !c.W1.empty(),
              {{}, {}, "|W1| = " + std::to_string(c.W1.size()) + ", |W1tilde| = " + std::to_string(c.W1tilde.size())});
    ck.expect("Omega_empty", c.Omega.empty(), nodes_witness(g, c.Omega, "Omega"));

    NodeSet stray;
    NodeSet unbalanced;
    for (auto [l, l1] : c.ell1) {
        if (!(c.Z1 | c.Z2 | c.Z).contains(l1))
            stray.insert(l);
        NodeSet succ = c.tilde.out(l);
        if ((succ & c.W).size() != 1 || (succ - c.W).size() != 1)
            unbalanced.insert(l);
    }
    ck.expect("ell1_in_Z1_Z2_Z", stray.empty(), nodes_witness(g, stray, "l whose l1 is in none of Z1, Z2, Z"));
    ck.expect("one_successor_in_W", unbalanced.empty(), nodes_witness(g, unbalanced, "l in M22tilde \\ X3"));

    NodeSet covered;
    bool disjoint = true;
    for (int t = 1; t <= 6; ++t) {
        disjoint = disjoint && covered.disjoint(c.Xt[static_cast<std::size_t>(t)]);
        covered |= c.Xt[static_cast<std::size_t>(t)];
    }
    ck.expect("X_partition", disjoint && covered == c.X,
              nodes_witness(g, (c.X - covered) | (covered - c.X), "X1..X6 must partition M_2^2 | M_3^3"));

    // Key inequality chain.
    Ratio sum_l(0);
    Ratio sum_bl(0);
    for (int i = 0; i < k; ++i) {
        sum_l += Ratio(g.load(i));
        sum_bl += Ratio(static_cast<std::int64_t>(b(i)) * g.load(i));
    }
    rep.eq7_rhs = sum_l == Ratio(0) ? Ratio(0) : sum_bl / sum_l;
    ck.expect("r_le_weighted_b_average", measured_r <= rep.eq7_rhs,
              {{}, {}, "r = " + measured_r.str() + ", rhs = " + rep.eq7_rhs.str()});

    bool a_ok = true;
    Ratio num(0);
    Ratio den(0);
    for (int i = 0; i < k; ++i) {
        int a = g.jobs_at(i);
        if (a < 2) {
            a_ok = false;
            break;
        }
        Ratio cap(a, a - 1);
        if (b(i) >= 2) {
            num += cap * Ratio(b(i));
            den += cap;
        } else {
            num += Ratio(b(i));
            den += Ratio(1);
        }
    }
    if (a_ok) {
        rep.chain_bound = num / den;
        ck.expect("weighted_b_average_le_chain_bound", rep.eq7_rhs <= rep.chain_bound,
                  {{}, {}, "rhs = " + rep.eq7_rhs.str() + ", chain = " + rep.chain_bound.str()});
    } else {
        ck.fail("weighted_b_average_le_chain_bound", {{}, {}, "some server holds fewer than 2 jobs"});
    }

    const Ratio half(1, 2);
    rep.eq8_lhs = Ratio(c.M(2, 2).size()) + half * Ratio(c.M(3, 3).size());
    rep.eq8_rhs = half * Ratio(c.M(3, 2).size());
    for (const auto& [ab, nodes] : c.m_ab) {
        auto [a, bb] = ab;
        if (bb == 1)
            rep.eq8_rhs += Ratio(nodes.size());
        else if (a >= 4 && bb >= 2 && bb <= a)
            rep.eq8_rhs += (Ratio(bb) - Ratio(4 * bb - 5, a - 1)) * Ratio(nodes.size());
    }
    const bool eq8 = rep.eq8_lhs <= rep.eq8_rhs;
    ck.expect("key_inequality", eq8, {{}, {}, "lhs = " + rep.eq8_lhs.str() + ", rhs = " + rep.eq8_rhs.str()});
    if (a_ok)
        ck.expect("key_inequality_matches_chain_bound", eq8 == (rep.chain_bound <= Ratio(5, 4)),
                  {{}, {}, "chain = " + rep.chain_bound.str()});
    ck.expect("r_le_5_4", measured_r <= Ratio(5, 4), {{}, {}, "r = " + measured_r.str()});

    // |X_t| <= c_t |Y_t|.
    static constexpr const char* bound_names[7] = {"",           "xy_bound_X1", "xy_bound_X2", "xy_bound_X3",
                                                   "xy_bound_X4", "xy_bound_X5", "xy_bound_X6"};
    for (int t = 1; t <= 6; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        Ratio coef = (t == 3 || t == 6) ? half : Ratio(1);
        int xs = c.Xt[ti].size();
        int ys = c.Yt[ti].size();
        bool ok = Ratio(xs) <= coef * Ratio(ys);
        CheckStatus status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        Witness w = nodes_witness(g, c.Xt[ti], "X" + std::to_string(t) + " (|Y| = " + std::to_string(ys) + ")");
        if (!ok && t == 6 && key_minimum != KeyMinimum::Attained) {
            status = CheckStatus::NotApplicable;
            w.note = "deviation does not attain the minimum selection key";
        }
        rep.xy_bounds.push_back({t, xs, coef, ys, status});
        ck.add(bound_names[t], status, ok ? Witness{} : std::move(w));
    }

    NodeSet seen = c.X;
    disjoint = true;
    NodeSet clash;
    for (int t = 1; t <= 6; ++t) {
        NodeSet y = c.Yt[static_cast<std::size_t>(t)];
        if (!seen.disjoint(y)) {
            disjoint = false;
            clash |= seen & y;
        }
        seen |= y;
    }
    rep.disjointness_pass = disjoint;
    ck.expect("Y_sets_disjoint", disjoint, nodes_witness(g, clash, "nodes shared between X and Y sets"));

    NodeSet lonely;
    for (int l : c.Xt[6]) {
        NodeSet company = c.companies.at(l);
        if (company.empty())
            lonely.insert(l);
        else
            rep.company_witnesses[l] = company.front();
    }
    if (key_minimum != KeyMinimum::Attained)
        ck.skip("company_exists", "deviation does not attain the minimum selection key");
    else
        ck.expect("company_exists", lonely.empty(), nodes_witness(g, lonely, "X6 nodes without a company"));
    return rep;
}

void require_passed(const CheckList& checks, const std::string& context)
{
    if (checks.passed())
        return;
    std::ostringstream os;
    os << context << ": failed";
    for (const Check* c : checks.failures())
        os << ' ' << c->name << (c->witness.note.empty() ? "" : " (" + c->witness.note + ")");
    throw VerificationFailure(os.str());
}

} // namespace lbg
