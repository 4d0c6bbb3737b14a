#pragma once

/// \file
/// \brief Min-max rooted tree cover: instance, solutions, MIP model, solvers.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mcfs/isograph.hpp"

namespace mcfs {

struct GraphEdge {
    int u = -1;
    int v = -1;
    double weight = 0.0;
    bool augmented = false;
};

/// Weighted graph plus one root per robot. Vertex and edge indices match the
/// isograph the instance was taken from; absent (dead) entries are skipped.
struct MmrtcInstance {
    std::vector<double> vertex_weight;
    std::vector<GraphEdge> edges;
    std::vector<int> roots;                     // duplicates allowed
    std::vector<std::uint8_t> vertex_present;  // empty means all present
    std::vector<std::uint8_t> edge_present;

    int vertex_count() const { return static_cast<int>(vertex_weight.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int k() const { return static_cast<int>(roots.size()); }
    bool has_vertex(int v) const { return vertex_present.empty() || vertex_present[static_cast<std::size_t>(v)]; }
    bool has_edge(int e) const { return edge_present.empty() || edge_present[static_cast<std::size_t>(e)]; }
    bool all_present() const;
    /// Throws InvalidInput on bad roots, endpoints or weights.
    void validate() const;
};

MmrtcInstance instance_from_isograph(const Isograph& g, std::vector<int> roots);

struct Tree {
    int robot = 0;
    int root = -1;
    std::vector<int> vertices;  // ascending
    std::vector<int> edges;     // ascending
    double cost = 0.0;

    bool contains(int v) const;
};

struct TreeCover {
    std::vector<Tree> trees;
    double makespan() const;
};

/// Sum of vertex weights plus edge weights.
double tree_cost(const MmrtcInstance& inst, const Tree& tree);
void recompute_costs(const MmrtcInstance& inst, TreeCover& cover);
/// Empty string when the cover is rooted, acyclic, connected and complete;
/// otherwise a description of the first violation found.
std::string cover_violation(const MmrtcInstance& inst, const TreeCover& cover);
/// Throws Error(..., "mmrtc") with the violation.
void validate_cover(const MmrtcInstance& inst, const TreeCover& cover);

// ---------------------------------------------------------------------------
// MIP model

enum class VarType { binary, continuous };
enum class Sense { le, ge, eq };

struct Variable {
    std::string name;
    VarType type = VarType::binary;
    double lb = 0.0;
    double ub = 1.0;
};

struct LinearTerm {
    int var = -1;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::string group;  // makespan, cover, root, tree, acyc, flow, link
    std::vector<LinearTerm> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
};

struct MipModel {
    int k = 0;
    int n_vertices = 0;
    int n_edges = 0;
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;

    // Layout: for each robot i a block of [x (E) | y (V) | fu (E) | fv (E)], then tau.
    int x(int i, int e) const { return block(i) + e; }
    int y(int i, int v) const { return block(i) + n_edges + v; }
    int fu(int i, int e) const { return block(i) + n_edges + n_vertices + e; }
    int fv(int i, int e) const { return block(i) + 2 * n_edges + n_vertices + e; }
    int tau() const { return k * (3 * n_edges + n_vertices); }
    std::size_t count_group(std::string_view group) const;

private:
    int block(int i) const { return i * (3 * n_edges + n_vertices); }
};

/// Requires every vertex and edge of the instance to be present.
MipModel build_model(const MmrtcInstance& inst);

/// CPLEX LP text for the model (minimize tau).
std::string write_lp(const MipModel& model);

/// Parses "name value" lines; blank lines and lines starting with '#' or '\' are skipped.
std::map<std::string, double> read_solution(const std::string& text);

/// Binary part of a solution: x[i][e], y[i][v].
struct Assignment {
    std::vector<std::vector<std::uint8_t>> x;
    std::vector<std::vector<std::uint8_t>> y;
};

Assignment assignment_from_values(const MipModel& model, const std::map<std::string, double>& values);
Assignment encode(const MmrtcInstance& inst, const TreeCover& cover);

/// True when continuous flows exist that, together with (x, y) and
/// tau = max tree cost, satisfy every model constraint.
bool assignment_feasible(const MmrtcInstance& inst, const Assignment& a);

/// Materializes trees from (x, y); throws Error(..., "mmrtc") when the
/// assignment violates a cover invariant.
TreeCover decode(const Assignment& a, const MmrtcInstance& inst);

/// Shortest-hop assignment of vertices to roots over a minimum spanning tree
/// of the non-augmented edges; each tree is the closure of its vertices in
/// that spanning tree. Throws Infeasible when a vertex reaches no root.
TreeCover warm_start(const MmrtcInstance& inst);

enum class SolveStatus { optimal, feasible, infeasible };
const char* to_string(SolveStatus s);

struct SolverOptions {
    std::string backend = "bundled";  // bundled | external
    std::string command;              // external: invoked as `command <lp> <sol>`
    double time_limit = 60.0;         // seconds
};

struct SolveResult {
    TreeCover cover;
    SolveStatus status = SolveStatus::feasible;
    std::vector<double> incumbent_history;  // makespan after each improvement, starting at the warm start
    double lower_bound = 0.0;
    long nodes = 0;
};

SolveResult solve(const MipModel& model, const MmrtcInstance& inst, const TreeCover& warm,
                  const SolverOptions& options);

/// {"status":..., "makespan":..., "trees":[{robot, root, vertices, edges, cost}]}
std::string cover_to_json_text(const TreeCover& cover, SolveStatus status);

/// Reads the isograph debug dump (vertex weights and edge weights only).
MmrtcInstance instance_from_dump_text(const std::string& text, std::vector<int> roots);

}  // namespace mcfs
