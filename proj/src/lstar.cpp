#include "quiclearn/lstar.hpp"

namespace quiclearn {

namespace {

// Routes equivalence-oracle membership traffic through the shared cache while
// keeping its own miss count, so the stats can split membership queries made
// for the table from those made while searching for counterexamples.
class CacheView : public MembershipOracle {
 public:
  explicit CacheView(QueryCache& cache) : cache_(&cache) {}

  std::vector<Output> query(const Word& w) override {
    bool miss = false;
    auto out = cache_->query(w, &miss);
    if (miss) ++misses_;
    return out;
  }
  std::uint64_t symbols_sent() const override {
    return cache_->oracle().symbols_sent();
  }
  std::uint64_t revision() const override { return cache_->oracle().revision(); }
  std::uint64_t misses() const { return misses_; }

 private:
  QueryCache* cache_;
  std::uint64_t misses_ = 0;
};

// Stabilization adds a row or a suffix per step and so terminates on its own;
// this bound only catches a membership oracle that keeps contradicting itself.
constexpr std::size_t kTableRoundCap = 100000;

}  // namespace

LearnResult learn(MembershipOracle& target, std::vector<Symbol> alphabet,
                  EquivalenceOracle& eq, const LearnConfig& cfg) {
  QueryCache cache(target);
  CacheView eq_view(cache);
  ObservationTable table(std::move(alphabet));
  LearnStats stats;
  const std::uint64_t symbols_before = target.symbols_sent();
  std::uint64_t seen_revision = target.revision();
  std::optional<MealyMachine> last;

  auto finalize_stats = [&]() {
    stats.membership_queries = cache.oracle_queries() - eq_view.misses();
    stats.total_input_symbols_sent = target.symbols_sent() - symbols_before;
  };
  // Restabilize until a whole pass completes without the oracle correcting
  // itself mid-flight. QueryCache already dropped its memo when it raised
  // OracleRevised, so each retry re-reads the (largely settled) answers; the
  // attempt cap only guards against an oracle that never stops revising.
  auto stabilize = [&]() {
    for (std::size_t attempt = 0;; ++attempt) {
      try {
        table.make_closed_and_consistent(cache, kTableRoundCap);
        return;
      } catch (const OracleRevised&) {
        if (attempt >= kTableRoundCap)
          throw TableError("oracle kept revising answers; table never held "
                           "still long enough to stabilize");
        seen_revision = target.revision();
      }
    }
  };

  try {
    stabilize();
    for (std::size_t round = 0;; ++round) {
      if (round >= cfg.max_rounds) {
        finalize_stats();
        throw LearnError("no stable model after " + std::to_string(round) +
                             " refinement rounds",
                         last, stats);
      }
      if (target.revision() != seen_revision) {
        // Earlier answers were corrected: rebuild the table from the revised
        // oracle before trusting any hypothesis again.
        seen_revision = target.revision();
        cache.clear_memo();
        stabilize();
      }
      std::optional<MealyMachine> conjecture;
      try {
        conjecture = table.hypothesis(cache);
      } catch (const OracleRevised&) {
        seen_revision = target.revision();
        stabilize();
        continue;
      }
      MealyMachine& hyp = *conjecture;
      last = hyp;
      ++stats.equivalence_queries;
      std::optional<Word> cex;
      try {
        cex = eq.find_counterexample(hyp, eq_view);
      } catch (const OracleRevised&) {
        // Noise was detected and healed while probing; whatever the probe saw
        // is an artifact. Restabilize and re-run the round.
        seen_revision = target.revision();
        stabilize();
        continue;
      }
      if (!cex) {
        finalize_stats();
        return LearnResult{std::move(hyp), stats};
      }
      try {
        table.refine(cache, *cex, kTableRoundCap);
        ++stats.refinement_rounds;
      } catch (const CounterexampleRejected&) {
        // Agreement on re-check (stale hypothesis or healed noise): ignore
        // the word and let the next round look again.
      } catch (const OracleRevised&) {
        seen_revision = target.revision();
        stabilize();
      }
    }
  } catch (const TableError& e) {
    finalize_stats();
    throw LearnError(e.what(), last, stats);
  }
}

}  // namespace quiclearn
