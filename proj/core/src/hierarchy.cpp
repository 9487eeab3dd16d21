/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/hierarchy.hpp"

#include "skelfit/error.hpp"
#include "skelfit/numeric_text.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>
#include <thread>

namespace skelfit
{

ParentMap::ParentMap(std::vector<std::optional<std::size_t>> parents) : m_parents(std::move(parents))
{
  const std::size_t m = m_parents.size();
  if (m == 0)
    throw Error(ErrorKind::InvalidSpec, "parent map is empty");

  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < m; ++i)
  {
    const auto& p = m_parents[i];
    if (!p)
    {
      if (root)
        throw Error(ErrorKind::InvalidSpec, "bodies " + std::to_string(*root) + " and " +
                                              std::to_string(i) + " are both roots")
          .at_body(i);
      root = i;
    }
    else if (*p >= m || *p == i)
      throw Error(ErrorKind::InvalidSpec, "body " + std::to_string(i) + " has invalid parent " +
                                            std::to_string(*p))
        .at_body(i);
  }
  if (!root)
    throw Error(ErrorKind::InvalidSpec, "parent map has no root");
  m_root = *root;

  // Every chain must reach the root within m steps.
  for (std::size_t i = 0; i < m; ++i)
  {
    std::size_t node = i;
    std::size_t steps = 0;
    while (m_parents[node])
    {
      node = *m_parents[node];
      if (++steps > m)
        throw Error(ErrorKind::InvalidSpec, "parent map has a cycle through body " + std::to_string(i))
          .at_body(i);
    }
  }
}

std::vector<std::size_t> ParentMap::topological_order() const
{
  std::vector<std::vector<std::size_t>> children(m_parents.size());
  for (std::size_t i = 0; i < m_parents.size(); ++i)
    if (m_parents[i])
      children[*m_parents[i]].push_back(i);

  std::vector<std::size_t> order;
  order.reserve(m_parents.size());
  std::queue<std::size_t> pending;
  pending.push(m_root);
  while (!pending.empty())
  {
    const std::size_t body = pending.front();
    pending.pop();
    order.push_back(body);
    for (std::size_t child : children[body])
      pending.push(child);
  }
  return order;
}

std::vector<std::pair<std::size_t, std::size_t>> ParentMap::edges() const
{
  std::vector<std::pair<std::size_t, std::size_t>> result;
  for (std::size_t i = 0; i < m_parents.size(); ++i)
    if (m_parents[i])
      result.emplace_back(std::min(i, *m_parents[i]), std::max(i, *m_parents[i]));
  std::sort(result.begin(), result.end());
  return result;
}

ParentMap read_parent_map_csv(std::istream& input)
{
  std::string line;
  if (!std::getline(input, line) || strip_cr(line) != "body,parent")
    throw Error(ErrorKind::Parse, "hierarchy file must start with header body,parent").at_row(1);

  std::vector<std::optional<std::size_t>> parents;
  std::vector<bool> seen;
  std::size_t line_number = 1;
  while (std::getline(input, line))
  {
    ++line_number;
    const std::string_view text = strip_cr(line);
    if (text.empty())
      continue;
    const auto fields = split_csv_line(text);
    if (fields.size() != 2)
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_number) + ": expected body,parent")
        .at_row(line_number);
    const auto body = parse_index(fields[0]);
    if (!body)
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_number) + ": bad body index")
        .at_row(line_number);

    std::optional<std::size_t> parent;
    const auto parent_value = parse_double(fields[1]);
    if (parent_value && *parent_value == -1.0)
      parent = std::nullopt;
    else if (const auto index = parse_index(fields[1]))
      parent = *index;
    else
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_number) + ": bad parent index")
        .at_row(line_number);

    if (parents.size() <= *body)
    {
      parents.resize(*body + 1);
      seen.resize(*body + 1, false);
    }
    if (seen[*body])
      throw Error(ErrorKind::DuplicateCell, "line " + std::to_string(line_number) +
                                              ": body " + std::to_string(*body) + " listed twice")
        .at_row(line_number);
    seen[*body] = true;
    parents[*body] = parent;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw Error(ErrorKind::MissingCell, "hierarchy file has no row for body " + std::to_string(i))
        .at_body(i);
  return ParentMap(std::move(parents));
}

ParentMap load_parent_map(const std::filesystem::path& path)
{
  std::ifstream input(path, std::ios::binary);
  if (!input)
    throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_parent_map_csv(input);
}

void write_parent_map_csv(std::ostream& output, const ParentMap& map)
{
  output << "body,parent\n";
  for (std::size_t i = 0; i < map.size(); ++i)
  {
    const auto parent = map.parent(i);
    output << i << ',';
    if (parent)
      output << *parent;
    else
      output << "-1";
    output << '\n';
  }
}

FitMatrix::FitMatrix(std::size_t body_count)
  : m_body_count(body_count),
    m_epsilon(body_count * body_count, std::numeric_limits<double>::quiet_NaN()),
    m_fits(body_count * body_count)
{
}

FitMatrix FitMatrix::from_epsilons(std::size_t body_count, const std::vector<double>& row_major)
{
  if (row_major.size() != body_count * body_count)
    throw Error(ErrorKind::InvalidSpec, "fit table must hold m*m entries");
  FitMatrix fits(body_count);
  for (std::size_t i = 0; i < body_count; ++i)
    for (std::size_t j = i + 1; j < body_count; ++j)
      fits.set(i, j, row_major[i * body_count + j]);
  return fits;
}

std::size_t FitMatrix::index(std::size_t i, std::size_t j) const
{
  if (i >= m_body_count || j >= m_body_count || i == j)
    throw Error(ErrorKind::InvalidSpec, "fit matrix index (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ") out of range");
  return std::min(i, j) * m_body_count + std::max(i, j);
}

void FitMatrix::set(std::size_t i, std::size_t j, double epsilon)
{
  m_epsilon[index(i, j)] = epsilon;
}

void FitMatrix::set_fit(JointFit fit)
{
  const std::size_t slot = index(fit.child, fit.parent);
  m_epsilon[slot] = fit.epsilon;
  m_fits[slot] = std::move(fit);
}

double FitMatrix::epsilon(std::size_t i, std::size_t j) const
{
  return m_epsilon[index(i, j)];
}

bool FitMatrix::has(std::size_t i, std::size_t j) const
{
  const double value = m_epsilon[index(i, j)];
  return std::isfinite(value) && value >= 0.0;
}

const JointFit* FitMatrix::fit(std::size_t i, std::size_t j) const
{
  const auto& slot = m_fits[index(i, j)];
  return slot ? &*slot : nullptr;
}

bool FitMatrix::is_complete() const
{
  for (std::size_t i = 0; i < m_body_count; ++i)
    for (std::size_t j = i + 1; j < m_body_count; ++j)
      if (!has(i, j))
        return false;
  return true;
}

FitMatrix build_fit_matrix(const CaptureSession& session, const SweepOptions& options)
{
  const std::size_t m = session.body_count();
  if (m < 2)
    throw Error(ErrorKind::DegenerateInput, "need at least 2 bodies to build a fit matrix");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      pairs.emplace_back(i, j);

  std::vector<std::optional<JointFit>> results(pairs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true)
    {
      const std::size_t task = next.fetch_add(1);
      if (task >= pairs.size())
        return;
      const auto [parent, child] = pairs[task];
      try
      {
        JointFit fit = solve_joint(session, child, parent, options.rank_tol);
        if (!options.keep_fits)
          fit.residual_per_frame = {};
        results[task] = std::move(fit);
      }
      catch (const Error& error)
      {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::make_exception_ptr(Error(error.kind(), std::string("pair (") +
                                                                  std::to_string(parent) + ", " +
                                                                  std::to_string(child) +
                                                                  "): " + error.what()));
      }
    }
  };

  std::size_t threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, pairs.size());
  if (threads == 1)
  {
    worker();
  }
  else
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }
  if (failure)
    std::rethrow_exception(failure);

  FitMatrix fits(m);
  for (auto& result : results)
    fits.set_fit(std::move(*result));
  return fits;
}

void write_fit_matrix_csv(std::ostream& output, const FitMatrix& fits)
{
  output << "body_i,body_j,epsilon_m\n";
  for (std::size_t i = 0; i < fits.body_count(); ++i)
    for (std::size_t j = i + 1; j < fits.body_count(); ++j)
      output << i << ',' << j << ',' << format_shortest(fits.epsilon(i, j)) << '\n';
}

UnionFind::UnionFind(std::size_t count) : m_parent(count), m_size(count, 1)
{
  std::iota(m_parent.begin(), m_parent.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t element)
{
  while (m_parent[element] != element)
  {
    m_parent[element] = m_parent[m_parent[element]];
    element = m_parent[element];
  }
  return element;
}

bool UnionFind::unite(std::size_t a, std::size_t b)
{
  a = find(a);
  b = find(b);
  if (a == b)
    return false;
  if (m_size[a] < m_size[b])
    std::swap(a, b);
  m_parent[b] = a;
  m_size[a] += m_size[b];
  return true;
}

double tree_weight(const FitMatrix& fits, std::vector<std::pair<std::size_t, std::size_t>> edges)
{
  for (auto& edge : edges)
    edge = std::minmax(edge.first, edge.second);
  std::sort(edges.begin(), edges.end());
  double total = 0.0;
  for (const auto& [i, j] : edges)
    total += fits.epsilon(i, j);
  return total;
}

HierarchyResult infer_hierarchy(const FitMatrix& fits, const InferOptions& options)
{
  const std::size_t m = fits.body_count();
  if (m == 0)
    throw Error(ErrorKind::IncompleteMatrix, "fit matrix is empty");
  const std::size_t root = options.root.value_or(0);
  if (root >= m)
    throw Error(ErrorKind::InvalidSpec, "root " + std::to_string(root) + " out of range").at_body(root);

  std::vector<WeightedEdge> candidates;
  candidates.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
    {
      if (!fits.has(i, j))
        throw Error(ErrorKind::IncompleteMatrix, "no finite fit error for pair (" + std::to_string(i) +
                                                   ", " + std::to_string(j) + ")");
      candidates.push_back({i, j, fits.epsilon(i, j)});
    }

  std::sort(candidates.begin(), candidates.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.epsilon != b.epsilon)
      return a.epsilon < b.epsilon;
    if (a.i != b.i)
      return a.i < b.i;
    return a.j < b.j;
  });

  UnionFind forest(m);
  std::vector<std::vector<std::size_t>> adjacency(m);
  std::vector<std::pair<std::size_t, std::size_t>> tree_edges;
  std::vector<WeightedEdge> unused;
  double max_tree_epsilon = 0.0;
  for (const WeightedEdge& edge : candidates)
  {
    if (tree_edges.size() + 1 < m && forest.unite(edge.i, edge.j))
    {
      tree_edges.emplace_back(edge.i, edge.j);
      adjacency[edge.i].push_back(edge.j);
      adjacency[edge.j].push_back(edge.i);
      max_tree_epsilon = std::max(max_tree_epsilon, edge.epsilon);
    }
    else
    {
      unused.push_back(edge);
    }
  }

  // Orient away from the root, visiting neighbours in index order.
  std::vector<std::optional<std::size_t>> parents(m);
  std::vector<bool> visited(m, false);
  std::queue<std::size_t> pending;
  pending.push(root);
  visited[root] = true;
  while (!pending.empty())
  {
    const std::size_t body = pending.front();
    pending.pop();
    auto neighbours = adjacency[body];
    std::sort(neighbours.begin(), neighbours.end());
    for (std::size_t next : neighbours)
    {
      if (visited[next])
        continue;
      visited[next] = true;
      parents[next] = body;
      pending.push(next);
    }
  }

  HierarchyResult result;
  result.parent = ParentMap(std::move(parents));
  std::sort(tree_edges.begin(), tree_edges.end());
  result.total_epsilon = tree_weight(fits, tree_edges);
  result.tree_edges = std::move(tree_edges);

  const double threshold = options.loop_factor * max_tree_epsilon;
  for (const WeightedEdge& edge : unused)
    if (edge.epsilon <= threshold)
      result.unused_low_error_edges.push_back(edge);
  return result;
}

} // namespace skelfit
