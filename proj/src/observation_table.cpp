#include "quiclearn/observation_table.hpp"

#include <algorithm>

namespace quiclearn {

const std::vector<Output>& QueryCache::query(const Word& w, bool* was_miss) {
  auto it = memo_.find(w);
  if (it != memo_.end()) {
    if (was_miss) *was_miss = false;
    return it->second;
  }
  auto out = oracle_->query(w);
  if (out.size() != w.size())
    throw TableError("oracle returned " + std::to_string(out.size()) +
                     " outputs for a " + std::to_string(w.size()) +
                     "-symbol word");
  ++misses_;
  if (was_miss) *was_miss = true;
  if (oracle_->revision() != seen_revision_) {
    // The answer just received is fine — it reflects the corrected oracle —
    // but everything memoized before it may not. Keep the fresh answer,
    // drop the rest, and make the caller restart its phase.
    seen_revision_ = oracle_->revision();
    memo_.clear();
    memo_.emplace(w, std::move(out));
    throw OracleRevised("oracle revised earlier answers while running '" +
                        to_string(w) + "'");
  }
  return memo_.emplace(w, std::move(out)).first->second;
}

ObservationTable::ObservationTable(std::vector<Symbol> alphabet)
    : alphabet_(std::move(alphabet)) {
  if (alphabet_.empty()) throw TableError("empty input alphabet");
  prefixes_.push_back({});
  in_prefixes_.insert({});
  add_boundary_extensions({});
  for (const auto& a : alphabet_) {
    suffixes_.push_back({a});
    in_suffixes_.insert({a});
  }
}

void ObservationTable::add_boundary_extensions(const Word& s_word) {
  for (const auto& a : alphabet_) {
    Word ext = s_word;
    ext.push_back(a);
    if (!in_prefixes_.count(ext) && !in_boundary_.count(ext)) {
      boundary_.push_back(ext);
      in_boundary_.insert(ext);
    }
  }
}

std::uint64_t ObservationTable::fill(QueryCache& cache) const {
  std::uint64_t misses = 0;
  auto touch = [&](const Word& p) {
    for (const auto& e : suffixes_) {
      Word w = p;
      w.insert(w.end(), e.begin(), e.end());
      bool miss = false;
      cache.query(w, &miss);
      if (miss) ++misses;
    }
  };
  for (const auto& p : prefixes_) touch(p);
  for (const auto& p : boundary_) touch(p);
  return misses;
}

std::vector<Output> ObservationTable::cell(const Word& p, const Word& e,
                                           QueryCache& cache) const {
  Word w = p;
  w.insert(w.end(), e.begin(), e.end());
  const auto& full = cache.query(w);
  return std::vector<Output>(full.end() - static_cast<std::ptrdiff_t>(e.size()),
                             full.end());
}

std::vector<Output> ObservationTable::row(const Word& p,
                                          QueryCache& cache) const {
  std::vector<Output> r;
  for (const auto& e : suffixes_) {
    auto c = cell(p, e, cache);
    r.insert(r.end(), c.begin(), c.end());
  }
  return r;
}

std::optional<Word> ObservationTable::closedness_violation(
    QueryCache& cache) const {
  std::set<std::vector<Output>> s_rows;
  for (const auto& p : prefixes_) s_rows.insert(row(p, cache));
  for (const auto& b : boundary_)
    if (!s_rows.count(row(b, cache))) return b;
  return std::nullopt;
}

std::optional<ObservationTable::ConsistencyViolation>
ObservationTable::consistency_violation(QueryCache& cache) const {
  for (std::size_t i = 0; i < prefixes_.size(); ++i) {
    for (std::size_t j = i + 1; j < prefixes_.size(); ++j) {
      if (row(prefixes_[i], cache) != row(prefixes_[j], cache)) continue;
      for (const auto& a : alphabet_) {
        Word pa = prefixes_[i], pb = prefixes_[j];
        pa.push_back(a);
        pb.push_back(a);
        for (const auto& e : suffixes_) {
          if (cell(pa, e, cache) != cell(pb, e, cache)) {
            Word suffix;
            suffix.push_back(a);
            suffix.insert(suffix.end(), e.begin(), e.end());
            return ConsistencyViolation{prefixes_[i], prefixes_[j], a, suffix};
          }
        }
      }
    }
  }
  return std::nullopt;
}

void ObservationTable::promote(const Word& boundary_word) {
  auto it = std::find(boundary_.begin(), boundary_.end(), boundary_word);
  if (it == boundary_.end())
    throw TableError("promote: word is not in the boundary: " +
                     to_string(boundary_word));
  boundary_.erase(it);
  in_boundary_.erase(boundary_word);
  prefixes_.push_back(boundary_word);
  in_prefixes_.insert(boundary_word);
  add_boundary_extensions(boundary_word);
}

void ObservationTable::add_suffix(const Word& e) {
  if (e.empty()) throw TableError("empty suffix column");
  if (in_suffixes_.insert(e).second) suffixes_.push_back(e);
}

void ObservationTable::make_closed_and_consistent(QueryCache& cache,
                                                  std::size_t max_rounds) {
  for (std::size_t round = 0;; ++round) {
    if (auto b = closedness_violation(cache)) {
      if (round >= max_rounds)
        throw TableError("table still not closed after " +
                         std::to_string(round) + " rounds; unresolved row: " +
                         to_string(*b));
      promote(*b);
      continue;
    }
    if (auto v = consistency_violation(cache)) {
      if (round >= max_rounds)
        throw TableError(
            "table still not consistent after " + std::to_string(round) +
            " rounds; prefixes '" + to_string(v->p1) + "' and '" +
            to_string(v->p2) + "' disagree after '" + v->input + "'");
      add_suffix(v->suffix);
      continue;
    }
    return;
  }
}

void ObservationTable::add_prefix(const Word& w) {
  if (in_prefixes_.count(w)) return;
  if (in_boundary_.count(w)) {
    promote(w);
    return;
  }
  prefixes_.push_back(w);
  in_prefixes_.insert(w);
  add_boundary_extensions(w);
}

MealyMachine ObservationTable::hypothesis(QueryCache& cache) const {
  if (closedness_violation(cache))
    throw TableError("hypothesis requested from an unclosed table");
  if (consistency_violation(cache))
    throw TableError("hypothesis requested from an inconsistent table");

  std::map<std::vector<Output>, std::size_t> state_of;
  std::vector<Word> reps;
  for (const auto& p : prefixes_) {
    auto r = row(p, cache);
    if (state_of.emplace(r, reps.size()).second) reps.push_back(p);
  }
  MealyMachine m(alphabet_);
  for (std::size_t i = 0; i < reps.size(); ++i)
    m.add_state("s" + std::to_string(i));
  m.set_initial(state_of.at(row(prefixes_.front(), cache)));
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (const auto& a : alphabet_) {
      Word ext = reps[i];
      ext.push_back(a);
      auto target = state_of.find(row(ext, cache));
      if (target == state_of.end())
        throw TableError("row of '" + to_string(ext) +
                         "' has no matching state");
      Word single{a};
      m.set_transition(i, a, target->second, cell(reps[i], single, cache)[0]);
    }
  }
  m.validate();
  return m;
}

void ObservationTable::refine(QueryCache& cache, const Word& counterexample,
                              std::size_t max_rounds) {
  auto hyp = hypothesis(cache);
  const auto& actual = cache.query(counterexample);
  auto predicted = hyp.run(counterexample);
  if (actual == predicted)
    throw CounterexampleRejected(
        "word does not separate hypothesis from target: " +
        to_string(counterexample));
  for (std::size_t len = 1; len <= counterexample.size(); ++len)
    add_prefix(Word(counterexample.begin(),
                    counterexample.begin() + static_cast<std::ptrdiff_t>(len)));
  make_closed_and_consistent(cache, max_rounds);
}

}  // namespace quiclearn
