#include "bubbletda/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace bubbletda {
namespace {

using Index = std::uint32_t;
constexpr Index kNone = std::numeric_limits<Index>::max();
constexpr std::size_t kMaxPoints = 600;

std::size_t choose(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Combinatorial number system rank of a vertex triple.
struct TriangleRank {
    explicit TriangleRank(std::size_t n) : c2(n + 1), c3(n + 1) {
        for (std::size_t i = 0; i <= n; ++i) {
            c2[i] = choose(i, 2);
            c3[i] = choose(i, 3);
        }
    }
    std::size_t operator()(Index a, Index b, Index c) const {
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        return c3[c] + c2[b] + a;
    }
    std::vector<std::size_t> c2, c3;
};

struct Edge {
    double value;
    Index a, b;  // a < b
};

struct Triangle {
    double value;
    Index a, b, c;  // a < b < c
};

using Column = std::vector<Index>;  // sorted ascending; pivot is back()

// Symmetric difference of two sorted index lists, in place into `target`.
void add_column(Column& target, const Column& source, Column& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

// Reduces `column` against stored columns until its pivot is unclaimed or it vanishes.
// Returns the pivot or kNone.
// Columns may store indices flipped as `flip - i` so that back() is the pivot either way.
Index reduce(Column& column, const std::vector<Index>& pivot_owner,
             const std::vector<Column>& reduced, Column& scratch, Index flip = 0) {
    while (!column.empty()) {
        const Index row = flip == 0 ? column.back() : flip - column.back();
        const Index owner = pivot_owner[row];
        if (owner == kNone) {
            return column.back();
        }
        add_column(column, reduced[owner], scratch);
    }
    return kNone;
}

}  // namespace

std::size_t PersistenceDiagram::finite_count() const {
    std::size_t count = 0;
    for (const auto& p : pairs) {
        count += p.multiplicity;
    }
    return count;
}

PersistenceDiagram make_diagram(int dimension, std::vector<PersistencePair> pairs,
                                std::vector<double> essential) {
    std::map<std::pair<double, double>, std::size_t> grouped;
    for (const auto& p : pairs) {
        if (p.death > p.birth && p.multiplicity > 0) {
            grouped[{p.birth, p.death}] += p.multiplicity;
        }
    }
    PersistenceDiagram diagram;
    diagram.dimension = dimension;
    diagram.pairs.reserve(grouped.size());
    for (const auto& [bd, mult] : grouped) {
        diagram.pairs.push_back({bd.first, bd.second, mult});
    }
    std::sort(essential.begin(), essential.end());
    diagram.essential = std::move(essential);
    return diagram;
}

DistanceMatrix pairwise_distances(const PointCloud& cloud) {
    if (cloud.empty()) {
        throw std::invalid_argument("cannot compute distances of an empty point cloud");
    }
    const std::size_t n = cloud.size();
    DistanceMatrix dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = cloud.point(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto q = cloud.point(j);
            double sum = 0.0;
            for (std::size_t k = 0; k < cloud.dim(); ++k) {
                const double diff = p[k] - q[k];
                sum += diff * diff;
            }
            dist.set(i, j, std::sqrt(sum));
        }
    }
    return dist;
}

double enclosing_radius(const DistanceMatrix& dist) {
    double radius = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        double farthest = 0.0;
        for (std::size_t j = 0; j < dist.size(); ++j) {
            farthest = std::max(farthest, dist(i, j));
        }
        radius = std::min(radius, farthest);
    }
    return dist.size() == 0 ? 0.0 : radius;
}

RipsDiagrams rips_persistence(const DistanceMatrix& dist, const RipsConfig& cfg) {
    if (cfg.max_homology_dim != 1) {
        throw std::invalid_argument("only max_homology_dim = 1 is supported");
    }
    if (cfg.max_filtration && !(*cfg.max_filtration > 0.0)) {
        throw std::invalid_argument("max_filtration must be positive");
    }
    const std::size_t n = dist.size();
    if (n == 0) {
        throw std::invalid_argument("rips_persistence needs at least one point");
    }
    if (n > kMaxPoints) {
        throw std::invalid_argument("rips_persistence supports at most " + std::to_string(kMaxPoints) +
                                    " points, got " + std::to_string(n));
    }
    const double threshold = cfg.max_filtration.value_or(enclosing_radius(dist));

    // Edges in filtration order.
    std::vector<Edge> edges;
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            if (dist(a, b) <= threshold) {
                edges.push_back({dist(a, b), a, b});
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        if (x.value != y.value) return x.value < y.value;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::vector<Index> edge_position(n * n, kNone);
    for (Index e = 0; e < edges.size(); ++e) {
        edge_position[edges[e].a * n + edges[e].b] = e;
    }

    // Degree 1 boundary columns over vertices. Negative edges merge components (H0
    // deaths); edges whose column vanishes close a cycle and start an H1 class.
    Column scratch;
    std::vector<PersistencePair> h0_pairs;
    std::vector<Index> vertex_owner(n, kNone);
    std::vector<Column> edge_reduced(edges.size());
    std::vector<Index> cycle_edges;
    for (Index e = 0; e < edges.size(); ++e) {
        Column column{edges[e].a, edges[e].b};
        const Index pivot = reduce(column, vertex_owner, edge_reduced, scratch);
        if (pivot == kNone) {
            cycle_edges.push_back(e);
        } else {
            vertex_owner[pivot] = e;
            h0_pairs.push_back({0.0, edges[e].value, 1});
            edge_reduced[e] = std::move(column);
        }
    }
    edge_reduced.clear();

    std::vector<double> h0_essential;
    for (Index v = 0; v < n; ++v) {
        if (vertex_owner[v] == kNone) {
            h0_essential.push_back(0.0);
        }
    }

    // Triangles whose three edges are present, in filtration order.
    std::vector<Triangle> triangles;
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            if (edge_position[a * n + b] == kNone) continue;
            for (Index c = b + 1; c < n; ++c) {
                if (edge_position[a * n + c] == kNone || edge_position[b * n + c] == kNone) continue;
                const double value = std::max({dist(a, b), dist(a, c), dist(b, c)});
                triangles.push_back({value, a, b, c});
            }
        }
    }
    std::sort(triangles.begin(), triangles.end(), [](const Triangle& x, const Triangle& y) {
        if (x.value != y.value) return x.value < y.value;
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.c < y.c;
    });
    const TriangleRank triangle_key(n);
    std::vector<Index> triangle_position(choose(n, 3), kNone);
    for (Index t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        for (Index e : {edge_position[tri.a * n + tri.b], edge_position[tri.a * n + tri.c],
                        edge_position[tri.b * n + tri.c]}) {
            if (edges[e].value > tri.value) {
                throw std::logic_error("filtration is not monotone: edge enters after its triangle");
            }
        }
        triangle_position[triangle_key(tri.a, tri.b, tri.c)] = t;
    }

    // Degree 1 coboundary columns of the cycle-closing edges, in reverse filtration
    // order. The H0-death edges are cleared: their columns can never produce a pivot.
    // Pivots are the earliest cofacet, stored at the back of a descending column.
    std::vector<PersistencePair> h1_pairs;
    std::vector<double> h1_essential;
    std::vector<Index> triangle_owner(triangles.size(), kNone);
    std::vector<Column> cofacet_reduced(edges.size());
    for (auto it = cycle_edges.rbegin(); it != cycle_edges.rend(); ++it) {
        const Edge& edge = edges[*it];
        Column column;
        for (Index c = 0; c < n; ++c) {
            if (c == edge.a || c == edge.b) continue;
            const Index t = triangle_position[triangle_key(edge.a, edge.b, c)];
            if (t != kNone) column.push_back(kNone - 1 - t);
        }
        std::sort(column.begin(), column.end());
        const Index pivot = reduce(column, triangle_owner, cofacet_reduced, scratch, kNone - 1);
        if (pivot == kNone) {
            h1_essential.push_back(edge.value);
        } else {
            const Index t = kNone - 1 - pivot;
            triangle_owner[t] = *it;
            h1_pairs.push_back({edge.value, triangles[t].value, 1});
            cofacet_reduced[*it] = std::move(column);
        }
    }

    RipsDiagrams result;
    result.h0 = make_diagram(0, std::move(h0_pairs), std::move(h0_essential));
    result.h1 = make_diagram(1, std::move(h1_pairs), std::move(h1_essential));
    return result;
}

double total_persistence(const PersistenceDiagram& diagram) {
    double total = 0.0;
    for (const auto& p : diagram.pairs) {
        total += static_cast<double>(p.multiplicity) * p.persistence();
    }
    return total;
}

void write_diagram_csv(std::ostream& os, const RipsDiagrams& diagrams, bool header) {
    const auto old_precision = os.precision(17);
    if (header) {
        os << "dim,birth,death,multiplicity\n";
    }
    for (const PersistenceDiagram* d : {&diagrams.h0, &diagrams.h1}) {
        for (const auto& p : d->pairs) {
            os << d->dimension << ',' << p.birth << ',' << p.death << ',' << p.multiplicity << '\n';
        }
        std::map<double, std::size_t> essential;
        for (double b : d->essential) {
            ++essential[b];
        }
        for (const auto& [birth, mult] : essential) {
            os << d->dimension << ',' << birth << ",inf," << mult << '\n';
        }
    }
    os.precision(old_precision);
}

}  // namespace bubbletda
