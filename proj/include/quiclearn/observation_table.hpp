#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "quiclearn/oracles.hpp"

namespace quiclearn {

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The oracle corrected earlier answers mid-operation (its revision counter
// moved), so memoized answers and fresh ones no longer describe the same
// target. Thrown by QueryCache the moment it notices; the memo is already
// dropped, and the interrupted phase just needs to start over.
class OracleRevised : public TableError {
 public:
  using TableError::TableError;
};

// Memoizes membership queries so the same word is never run on the target
// twice, and guarantees that every answer it serves comes from one oracle
// revision: a query that lands after a revision change clears the memo and
// raises OracleRevised instead of mixing stale and fresh answers.
class QueryCache {
 public:
  explicit QueryCache(MembershipOracle& oracle)
      : oracle_(&oracle), seen_revision_(oracle.revision()) {}

  const std::vector<Output>& query(const Word& w, bool* was_miss = nullptr);
  std::uint64_t oracle_queries() const { return misses_; }
  void clear_memo() { memo_.clear(); }
  MembershipOracle& oracle() { return *oracle_; }

 private:
  MembershipOracle* oracle_;
  std::map<Word, std::vector<Output>> memo_;
  std::uint64_t misses_ = 0;
  std::uint64_t seen_revision_;
};

// A supposed counterexample on which hypothesis and target actually agree.
class CounterexampleRejected : public TableError {
 public:
  using TableError::TableError;
};

// Observation table for Mealy-machine learning. Rows are the prefix set S
// (always prefix-closed, seeded with the empty word) plus its one-symbol
// boundary S·A \ S; columns are the suffix set E, seeded with one singleton
// per input symbol. The cell for (p, e) holds the last |e| outputs of running
// p·e, so every cell is defined from the first hypothesis on — Mealy machines
// have no output for the empty word, hence no empty suffix column.
class ObservationTable {
 public:
  explicit ObservationTable(std::vector<Symbol> alphabet);

  const std::vector<Symbol>& alphabet() const { return alphabet_; }
  const std::vector<Word>& prefixes() const { return prefixes_; }
  const std::vector<Word>& boundary() const { return boundary_; }
  const std::vector<Word>& suffixes() const { return suffixes_; }

  // Queries every (row, column) pair once; returns how many of those were
  // cache misses. Never more than |S ∪ S·A| · |E|.
  std::uint64_t fill(QueryCache& cache) const;

  std::vector<Output> cell(const Word& p, const Word& e,
                           QueryCache& cache) const;
  std::vector<Output> row(const Word& p, QueryCache& cache) const;

  // First boundary word (in insertion order) whose row matches no S row.
  std::optional<Word> closedness_violation(QueryCache& cache) const;

  struct ConsistencyViolation {
    Word p1, p2;   // equal-row prefixes that disagree after `input`
    Symbol input;
    Word suffix;   // input ++ distinguishing column; adding it splits the rows
  };
  std::optional<ConsistencyViolation> consistency_violation(
      QueryCache& cache) const;

  void promote(const Word& boundary_word);  // move into S, extend boundary
  void add_suffix(const Word& e);

  // Alternates closedness promotions and consistency suffixes until stable.
  // Each promotion/addition consumes one round; exceeding max_rounds raises
  // TableError naming the unresolved violation.
  void make_closed_and_consistent(QueryCache& cache, std::size_t max_rounds);

  // Conjecture from a closed and consistent table (throws TableError
  // otherwise). States are distinct rows in first-occurrence order, named
  // s0, s1, ...; initial state is the empty word's row.
  MealyMachine hypothesis(QueryCache& cache) const;

  // Folds a counterexample in by adding all its prefixes to S, then
  // re-stabilizes. Throws CounterexampleRejected if the word does not in fact
  // separate the current hypothesis from the target.
  void refine(QueryCache& cache, const Word& counterexample,
              std::size_t max_rounds);

 private:
  void add_prefix(const Word& w);
  void add_boundary_extensions(const Word& s_word);

  std::vector<Symbol> alphabet_;
  std::vector<Word> prefixes_;
  std::vector<Word> boundary_;
  std::vector<Word> suffixes_;
  std::set<Word> in_prefixes_;
  std::set<Word> in_boundary_;
  std::set<Word> in_suffixes_;
};

}  // namespace quiclearn
