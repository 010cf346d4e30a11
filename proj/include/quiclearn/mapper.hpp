#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "quiclearn/oracles.hpp"
#include "quiclearn/quic_packets.hpp"
#include "quiclearn/quic_server.hpp"
#include "quiclearn/quic_symbols.hpp"

namespace quiclearn {

struct StoredTags {
  std::string scfg, stk;
};

// Translates abstract symbols into concrete packets and back, tracking the
// little state that makes the abstraction work: the current connection id,
// and the last SCFG/STK tokens seen in a rejection. INIT-CHLO and 0RTT-CHLO
// open fresh connection ids; FULL-CHLO, GET and CLOSE go to the current one
// (id -1 when none is open yet, which real servers answer with a reset or
// silence).
class MapperSession {
 public:
  ConcretePacket concretize(const Symbol& symbol);  // throws on unknown symbol
  Output abstractize(const std::optional<ConcretePacket>& response);
  void reset();  // fresh session; connection ids keep counting up

  std::int64_t current_conn_id() const { return current_; }
  const std::optional<StoredTags>& stored_tags() const { return tags_; }
  // Raw frame kind per abstractize call ("none" for silence). This is where
  // responses that abstract to EXP, like bare ACKs, stay visible.
  const std::vector<std::string>& raw_log() const { return raw_log_; }

 private:
  std::int64_t next_conn_ = 0;
  std::int64_t current_ = -1;
  std::optional<StoredTags> tags_;
  std::vector<std::string> raw_log_;
};

// An observed response that is known to be an artifact. DISCARD_AND_RETRY
// re-runs the probe in isolation; REPLACE rewrites the output in place.
struct FilterRule {
  enum class Action { DiscardAndRetry, Replace };
  Symbol input;
  Output observed;
  Action action;
  Output replacement;  // only for Replace
};

// The one rule that recurring manual analysis keeps needing: an HTTP body
// observed in answer to a fresh hello is a leftover from the previous
// connection crossing on the wire, never the hello's real answer.
std::vector<FilterRule> default_filters();

// One rule per line: `INPUT OBSERVED retry` or `INPUT OBSERVED replace OUT`.
// Blank lines and #-comments allowed. Throws std::invalid_argument with the
// line number on malformed rules.
std::vector<FilterRule> parse_filter_rules(std::string_view text);
std::vector<FilterRule> load_filter_file(const std::string& path);

// Raised when repetition cannot produce a believable answer: a vote that
// stays tied, or a filter that keeps rejecting every retry.
class NonDeterministicResponse : public std::runtime_error {
 public:
  NonDeterministicResponse(const std::string& what, Word word,
                           std::size_t position,
                           std::map<Output, int> observed)
      : std::runtime_error(what),
        word(std::move(word)),
        position(position),
        observed(std::move(observed)) {}
  Word word;
  std::size_t position;
  std::map<Output, int> observed;
};

enum class VoteMode {
  // Repeat each symbol within one session and vote on the spot. Faithful to
  // sending every input three times, and therefore exposed to the artifacts
  // that repetition itself creates on state-changing inputs (see
  // skip_repeat).
  InSession,
  // Re-run the whole word per repetition and vote per position across runs.
  // Repetition never perturbs the session, and votes pool across overlapping
  // words, so verdicts keep hardening as learning proceeds. The default.
  WholeWordRevote,
};

struct DenoiseConfig {
  std::size_t vote_repeats = 3;  // odd, >= 1
  VoteMode vote_mode = VoteMode::WholeWordRevote;
  // In-session only: inputs sent once instead of vote_repeats times, because
  // repeating them drags the session into a different state (a second CLOSE
  // hits an already-closed connection, a second 0RTT-CHLO resumes with the
  // freshly issued tokens, a second FULL-CHLO re-helloes mid-handshake).
  std::set<Symbol> skip_repeat = {kClose, kZeroRttChlo, kFullChlo};
  std::vector<FilterRule> filters = default_filters();
  std::size_t filter_retry_budget = 3;
  // Whole-word mode: a position's verdict is committed once the leading
  // output beats the runner-up by this margin; until then extra passes are
  // added (at most extra_pass_cap beyond vote_repeats per query). A query
  // that exhausts its passes commits the plurality leader anyway, and only an
  // outright tie at the cap is reported as non-determinism. Committed
  // verdicts are sticky: later evidence overturns one only when the new
  // leader beats the committed output's count by this same margin, so a
  // verdict cannot oscillate on single-vote swings.
  int vote_margin = 4;
  std::size_t extra_pass_cap = 30;

  void validate() const;  // throws std::invalid_argument
};

// Majority vote that ignores EXP unless nothing else was seen: a timeout can
// always be a repeat answering an already-answered request, so any concrete
// response outvotes it. Returns nullopt on a tie between concrete outputs.
std::optional<Output> plurality_vote(const std::vector<Output>& observations);

// A resettable target that speaks abstract symbols; the seam between the
// de-noising layer and either the in-process simulator or a remote socket.
class AbstractSul {
 public:
  virtual ~AbstractSul() = default;
  virtual Output send_symbol(const Symbol& symbol) = 0;
  virtual void reset() = 0;
};

// Mapper session glued to the in-process simulated server.
class SimAbstractSul : public AbstractSul {
 public:
  SimAbstractSul() = default;
  explicit SimAbstractSul(QuicSimServer::Config cfg) : server_(cfg) {}

  Output send_symbol(const Symbol& symbol) override {
    return session_.abstractize(server_.handle(session_.concretize(symbol)));
  }
  void reset() override {
    session_.reset();
    server_.reset();
  }

  MapperSession& session() { return session_; }
  QuicSimServer& server() { return server_; }

 private:
  MapperSession session_;
  QuicSimServer server_;
};

// Membership oracle that de-noises an AbstractSul by repetition and voting.
//
// In whole-word mode every query's evidence is pooled per word prefix, and a
// verdict, once handed out, is only revised when later evidence overturns it
// — in which case revision() ticks so the learner knows to rebuild whatever
// it derived from the old answer. Identical queries with no revision in
// between return identical outputs.
class DenoisingOracle : public MembershipOracle {
 public:
  explicit DenoisingOracle(AbstractSul& sul, DenoiseConfig cfg = {});

  std::vector<Output> query(const Word& w) override;
  std::uint64_t symbols_sent() const override { return symbols_sent_; }
  std::uint64_t revision() const override { return revision_; }

  // Observations behind the most recent query, per position: each raw repeat
  // (pre-vote) in-session, each pass's filtered observation in whole-word
  // mode. Frozen whole-word queries leave this empty.
  const std::vector<std::vector<Output>>& last_observations() const {
    return last_obs_;
  }
  const DenoiseConfig& config() const { return cfg_; }

 private:
  struct PoolEntry {
    std::map<Output, int> votes;
    std::optional<Output> reported;
  };

  Output send(const Symbol& s);
  Output filtered(const Word& w, std::size_t pos, Output obs);
  Output vote_in_session(const std::vector<Output>& obs, const Word& w,
                         std::size_t pos) const;
  void vote_pass(const Word& w);
  std::vector<Output> query_in_session(const Word& w);
  std::vector<Output> query_whole_word(const Word& w);

  AbstractSul* sul_;
  DenoiseConfig cfg_;
  std::map<Word, PoolEntry> pool_;  // keyed by word prefix
  std::vector<std::vector<Output>> last_obs_;
  std::uint64_t symbols_sent_ = 0;
  std::uint64_t revision_ = 0;
};

}  // namespace quiclearn
