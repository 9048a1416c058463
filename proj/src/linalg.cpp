#include "halfder/linalg.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace halfder {

void normalize(SparseVec& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  out.reserve(v.size());
  for (auto& [c, s] : v) {
    if (!out.empty() && out.back().first == c)
      out.back().second += s;
    else
      out.emplace_back(c, std::move(s));
    if (out.back().second.is_zero()) out.pop_back();
  }
  v = std::move(out);
}

Eliminator::Eliminator(int ncols)
    : ncols_(ncols), pivot_row_(static_cast<size_t>(ncols), -1), acc_(static_cast<size_t>(ncols)),
      touched_(static_cast<size_t>(ncols), 0) {}

SparseVec Eliminator::reduce(const SparseVec& v) const {
  std::priority_queue<int, std::vector<int>, std::greater<>> heap;
  for (const auto& [c, s] : v) {
    if (c < 0 || c >= ncols_) throw std::out_of_range("Eliminator: column out of range");
    if (!touched_[c]) {
      touched_[c] = 1;
      heap.push(c);
    }
    acc_[c] += s;
  }
  SparseVec out;
  while (!heap.empty()) {
    const int c = heap.top();
    heap.pop();
    touched_[c] = 0;
    if (acc_[c].is_zero()) continue;
    const int r = pivot_row_[c];
    if (r < 0) {
      // Leading column found: collect it and everything still pending.
      out.emplace_back(c, std::move(acc_[c]));
      acc_[c] = Scalar();
      while (!heap.empty()) {
        const int d = heap.top();
        heap.pop();
        touched_[d] = 0;
        if (!acc_[d].is_zero()) out.emplace_back(d, std::move(acc_[d]));
        acc_[d] = Scalar();
      }
      break;
    }
    const Scalar f = std::move(acc_[c]);
    acc_[c] = Scalar();
    const SparseVec& prow = rows_[static_cast<size_t>(r)];
    for (size_t k = 1; k < prow.size(); ++k) {
      const int j = prow[k].first;
      if (!touched_[j]) {
        touched_[j] = 1;
        heap.push(j);
      }
      acc_[j].sub_mul(f, prow[k].second);
    }
  }
  return out;
}

bool Eliminator::add_row(const SparseVec& row) {
  if (full_rank()) return false;
  SparseVec r = reduce(row);
  if (r.empty()) return false;
  if (!r.front().second.is_one()) {
    const Scalar inv = r.front().second.inverse();
    for (auto& e : r) e.second *= inv;
  }
  pivot_row_[r.front().first] = static_cast<int>(rows_.size());
  rows_.push_back(std::move(r));
  return true;
}

bool Eliminator::in_span(const SparseVec& v) const { return reduce(v).empty(); }

std::vector<int> Eliminator::pivots() const {
  std::vector<int> p;
  p.reserve(rows_.size());
  for (const auto& r : rows_) p.push_back(r.front().first);
  return p;
}

std::vector<SparseVec> Eliminator::rref() const {
  std::vector<int> order(rows_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rows_[static_cast<size_t>(a)].front().first > rows_[static_cast<size_t>(b)].front().first; });

  // Back substitution from the last pivot: a fully reduced row has nonzeros only at
  // its own pivot and at free columns, so one pass over each row's pivot entries suffices.
  std::vector<SparseVec> reduced(rows_.size());
  std::vector<int> reduced_of_col(static_cast<size_t>(ncols_), -1);
  for (int idx : order) {
    const SparseVec& row = rows_[static_cast<size_t>(idx)];
    const int p = row.front().first;
    SparseVec out;
    out.reserve(row.size());
    out.emplace_back(p, Scalar(1));
    SparseVec extra;
    for (size_t k = 1; k < row.size(); ++k) {
      const int c = row[k].first;
      if (pivot_row_[c] < 0) {
        extra.emplace_back(c, row[k].second);
        continue;
      }
      const SparseVec& sub = reduced[static_cast<size_t>(reduced_of_col[c])];
      for (size_t j = 1; j < sub.size(); ++j) extra.emplace_back(sub[j].first, -(row[k].second * sub[j].second));
    }
    normalize(extra);
    out.insert(out.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
    reduced_of_col[p] = idx;
    reduced[static_cast<size_t>(idx)] = std::move(out);
  }
  std::vector<SparseVec> result;
  result.reserve(rows_.size());
  for (auto it = order.rbegin(); it != order.rend(); ++it) result.push_back(std::move(reduced[static_cast<size_t>(*it)]));
  return result;
}

std::vector<SparseVec> Eliminator::kernel() const {
  const auto r = rref();
  std::vector<SparseVec> byfree(static_cast<size_t>(ncols_));
  for (int c = 0; c < ncols_; ++c)
    if (pivot_row_[c] < 0) byfree[static_cast<size_t>(c)].emplace_back(c, Scalar(1));
  for (const auto& row : r) {
    const int p = row.front().first;
    for (size_t k = 1; k < row.size(); ++k) byfree[static_cast<size_t>(row[k].first)].emplace_back(p, -row[k].second);
  }
  std::vector<SparseVec> vecs;
  for (int c = 0; c < ncols_; ++c) {
    if (pivot_row_[c] >= 0) continue;
    auto v = std::move(byfree[static_cast<size_t>(c)]);
    normalize(v);
    vecs.push_back(std::move(v));
  }
  return row_space_basis(vecs, ncols_);
}

int rank_of(const std::vector<SparseVec>& vectors, int ncols) {
  Eliminator e(ncols);
  for (const auto& v : vectors) {
    e.add_row(v);
    if (e.full_rank()) break;
  }
  return e.rank();
}

std::vector<SparseVec> row_space_basis(const std::vector<SparseVec>& vectors, int ncols) {
  Eliminator e(ncols);
  for (const auto& v : vectors) e.add_row(v);
  return e.rref();
}

}  // namespace halfder
