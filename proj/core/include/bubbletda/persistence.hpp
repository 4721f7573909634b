/**
 * @file persistence.hpp
 * @brief Vietoris-Rips persistent homology in degrees 0 and 1 over Z/2.
 *
 * A simplex enters the filtration at the largest pairwise distance between its
 * vertices (closed convention). Simplices with equal filtration value are ordered
 * by dimension, then lexicographically by sorted vertex indices.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "bubbletda/embedding.hpp"

namespace bubbletda {

/// Dense symmetric matrix of Euclidean distances with zero diagonal.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    /// Sets both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double value) {
        entries_[i * n_ + j] = value;
        entries_[j * n_ + i] = value;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

struct PersistencePair {
    double birth = 0.0;
    double death = 0.0;
    std::size_t multiplicity = 1;

    [[nodiscard]] double persistence() const { return death - birth; }
    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
    int dimension = 0;
    std::vector<PersistencePair> pairs;  ///< finite pairs, sorted by (birth, death), b < d
    std::vector<double> essential;       ///< births of classes that never die, sorted

    [[nodiscard]] bool empty() const { return pairs.empty() && essential.empty(); }
    /// Finite pairs counted with multiplicity.
    [[nodiscard]] std::size_t finite_count() const;

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Groups equal (birth, death) values into multiplicities and sorts. Drops pairs with death <= birth.
[[nodiscard]] PersistenceDiagram make_diagram(int dimension, std::vector<PersistencePair> pairs,
                                              std::vector<double> essential = {});

struct RipsConfig {
    int max_homology_dim = 1;
    /// Largest filtration value included. Defaults to the enclosing radius of the
    /// cloud, where the Rips complex is a cone and every H1 class has already died.
    std::optional<double> max_filtration;
};

struct RipsDiagrams {
    PersistenceDiagram h0;
    PersistenceDiagram h1;
};

/// Throws std::invalid_argument on an empty cloud.
[[nodiscard]] DistanceMatrix pairwise_distances(const PointCloud& cloud);

/// min over points of the largest distance to any other point.
[[nodiscard]] double enclosing_radius(const DistanceMatrix& dist);

[[nodiscard]] RipsDiagrams rips_persistence(const DistanceMatrix& dist, const RipsConfig& cfg = {});

/// Sum of (death - birth) over finite pairs, weighted by multiplicity.
[[nodiscard]] double total_persistence(const PersistenceDiagram& diagram);

/// Rows `dim,birth,death,multiplicity`; essential classes use the literal `inf`.
void write_diagram_csv(std::ostream& os, const RipsDiagrams& diagrams, bool header = true);

}  // namespace bubbletda
