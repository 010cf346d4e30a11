#include "quiclearn/mapper.hpp"

#include <fstream>
#include <sstream>

namespace quiclearn {

namespace {
constexpr const char* kGetHost = "www.example.org";
}

ConcretePacket MapperSession::concretize(const Symbol& symbol) {
  ConcretePacket p;
  if (symbol == kInitChlo) {
    current_ = next_conn_++;
    p.conn_id = current_;
    p.frames.push_back(Frame{FrameKind::Chlo, kHandshakeStream, {}});
  } else if (symbol == kFullChlo) {
    p.conn_id = current_;
    Frame f{FrameKind::Chlo, kHandshakeStream, {}};
    if (tags_) {
      f.tags[kTagScfg] = tags_->scfg;
      f.tags[kTagStk] = tags_->stk;
    }
    p.frames.push_back(std::move(f));
  } else if (symbol == kZeroRttChlo) {
    current_ = next_conn_++;
    p.conn_id = current_;
    Frame f{FrameKind::Chlo, kHandshakeStream, {}};
    if (tags_) {
      f.tags[kTagScfg] = tags_->scfg;
      f.tags[kTagStk] = tags_->stk;
    }
    p.frames.push_back(std::move(f));
  } else if (symbol == kGet) {
    p.conn_id = current_;
    Frame f{FrameKind::HttpGet, kHeadersStream, {}};
    f.tags[kTagSni] = kGetHost;
    p.frames.push_back(std::move(f));
  } else if (symbol == kClose) {
    p.conn_id = current_;
    p.frames.push_back(Frame{FrameKind::ConnClose, kHandshakeStream, {}});
  } else {
    throw std::invalid_argument("unknown abstract symbol: " + symbol);
  }
  return p;
}

Output MapperSession::abstractize(
    const std::optional<ConcretePacket>& response) {
  if (!response) {
    raw_log_.push_back("none");
    return kOutExp;
  }
  if (response->frames.empty()) {
    raw_log_.push_back("empty");
    return "UNKNOWN:empty";
  }
  const Frame& f = response->frames.front();
  raw_log_.push_back(std::string(frame_kind_name(f.kind)));
  switch (f.kind) {
    case FrameKind::Rej: {
      auto scfg = f.tags.find(kTagScfg);
      auto stk = f.tags.find(kTagStk);
      if (scfg != f.tags.end() && stk != f.tags.end())
        tags_ = StoredTags{scfg->second, stk->second};
      return kOutRej;
    }
    case FrameKind::Shlo:
      return kOutShlo;
    case FrameKind::HttpResp:
      return kOutHttp;
    case FrameKind::ConnClose:
      return kOutClosed;
    case FrameKind::Prst:
      return kOutPrst;
    case FrameKind::Ack:
      // Pure transport acknowledgement: nothing at the abstract level, but
      // the raw_log keeps it distinguishable from a real timeout.
      return kOutExp;
    default:
      return "UNKNOWN:" + std::string(frame_kind_name(f.kind));
  }
}

void MapperSession::reset() {
  current_ = -1;
  tags_.reset();
  raw_log_.clear();
}

std::vector<FilterRule> default_filters() {
  return {FilterRule{kInitChlo, kOutHttp, FilterRule::Action::DiscardAndRetry,
                     ""}};
}

std::vector<FilterRule> parse_filter_rules(std::string_view text) {
  std::vector<FilterRule> rules;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string input, observed, action, replacement;
    if (!(fields >> input)) continue;  // blank or comment-only line
    auto bad = [&](const std::string& why) {
      throw std::invalid_argument("filter rules line " +
                                  std::to_string(lineno) + ": " + why);
    };
    if (!(fields >> observed >> action)) bad("expected: INPUT OBSERVED ACTION");
    FilterRule r{input, observed, FilterRule::Action::DiscardAndRetry, ""};
    if (action == "retry") {
      if (fields >> replacement) bad("retry takes no argument");
    } else if (action == "replace") {
      if (!(fields >> replacement)) bad("replace needs an output");
      std::string extra;
      if (fields >> extra) bad("trailing tokens after replacement");
      r.action = FilterRule::Action::Replace;
      r.replacement = replacement;
    } else {
      bad("unknown action '" + action + "' (want retry or replace)");
    }
    rules.push_back(std::move(r));
  }
  return rules;
}

std::vector<FilterRule> load_filter_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open filter file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_filter_rules(buf.str());
}

void DenoiseConfig::validate() const {
  if (vote_repeats == 0 || vote_repeats % 2 == 0)
    throw std::invalid_argument("vote_repeats must be odd and positive");
  if (vote_margin < 1)
    throw std::invalid_argument("vote_margin must be at least 1");
  for (const auto& r : filters)
    if (r.action == FilterRule::Action::Replace && r.replacement.empty())
      throw std::invalid_argument("replace rule with empty replacement");
}

std::optional<Output> plurality_vote(const std::vector<Output>& observations) {
  std::map<Output, int> counts;
  for (const auto& o : observations)
    if (o != kOutExp) ++counts[o];
  if (counts.empty()) return kOutExp;
  int best = 0;
  for (const auto& [o, n] : counts) best = std::max(best, n);
  std::optional<Output> winner;
  for (const auto& [o, n] : counts) {
    if (n != best) continue;
    if (winner) return std::nullopt;  // tied concrete outputs
    winner = o;
  }
  return winner;
}

DenoisingOracle::DenoisingOracle(AbstractSul& sul, DenoiseConfig cfg)
    : sul_(&sul), cfg_(std::move(cfg)) {
  cfg_.validate();
}

Output DenoisingOracle::send(const Symbol& s) {
  ++symbols_sent_;
  return sul_->send_symbol(s);
}

Output DenoisingOracle::filtered(const Word& w, std::size_t pos, Output obs) {
  std::size_t budget = cfg_.filter_retry_budget;
  for (;;) {
    const FilterRule* hit = nullptr;
    for (const auto& r : cfg_.filters) {
      if (r.input == w[pos] && r.observed == obs) {
        hit = &r;
        break;
      }
    }
    if (!hit) return obs;
    if (hit->action == FilterRule::Action::Replace) return hit->replacement;
    if (budget == 0)
      throw NonDeterministicResponse(
          "filter kept rejecting '" + obs + "' for input '" + w[pos] +
              "' after " + std::to_string(cfg_.filter_retry_budget) +
              " retries in word '" + to_string(w) + "'",
          w, pos, {{obs, 1}});
    --budget;
    // Re-run the probe in isolation: fresh session, replay the prefix once,
    // send the suspect input once. Leaves the session exactly one send past
    // the prefix, so the caller can just continue with the next position.
    sul_->reset();
    for (std::size_t j = 0; j < pos; ++j) send(w[j]);
    obs = send(w[pos]);
  }
}

Output DenoisingOracle::vote_in_session(const std::vector<Output>& obs,
                                        const Word& w, std::size_t pos) const {
  auto winner = plurality_vote(obs);
  if (!winner) {
    std::map<Output, int> counts;
    for (const auto& o : obs) ++counts[o];
    throw NonDeterministicResponse(
        "tied vote for input '" + w[pos] + "' in word '" + to_string(w) + "'",
        w, pos, std::move(counts));
  }
  return *winner;
}

std::vector<Output> DenoisingOracle::query_in_session(const Word& w) {
  sul_->reset();
  last_obs_.assign(w.size(), {});
  std::vector<Output> out;
  out.reserve(w.size());
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    const Symbol& sym = w[pos];
    std::size_t reps = cfg_.skip_repeat.count(sym) ? 1 : cfg_.vote_repeats;
    std::vector<Output> obs;
    obs.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) obs.push_back(send(sym));
    last_obs_[pos] = obs;
    out.push_back(filtered(w, pos, vote_in_session(obs, w, pos)));
  }
  return out;
}

void DenoisingOracle::vote_pass(const Word& w) {
  sul_->reset();
  Word prefix;
  prefix.reserve(w.size());
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    Output obs = filtered(w, pos, send(w[pos]));
    last_obs_[pos].push_back(obs);
    prefix.push_back(w[pos]);
    ++pool_[prefix].votes[obs];
  }
}

std::vector<Output> DenoisingOracle::query_whole_word(const Word& w) {
  // Frozen fast path: every prefix already has a committed verdict, so the
  // answer is read off without touching the target.
  {
    std::vector<Output> out;
    Word prefix;
    bool frozen = true;
    for (const auto& s : w) {
      prefix.push_back(s);
      auto it = pool_.find(prefix);
      if (it == pool_.end() || !it->second.reported) {
        frozen = false;
        break;
      }
      out.push_back(*it->second.reported);
    }
    if (frozen) {
      last_obs_.clear();
      return out;
    }
  }

  last_obs_.assign(w.size(), {});
  std::size_t passes = 0;
  std::size_t target = cfg_.vote_repeats;
  const std::size_t cap = cfg_.vote_repeats + cfg_.extra_pass_cap;
  for (;;) {
    while (passes < target) {
      vote_pass(w);
      ++passes;
    }
    // Judge every position on its pooled counts. Positions with a standing
    // verdict keep it unless a challenger beats the incumbent's count by the
    // full margin (hysteresis — a verdict never flip-flops on a one-vote
    // swing). Positions with no verdict yet need a unique leader clearing the
    // margin over the runner-up; otherwise more passes, up to the cap.
    std::vector<Output> winners;
    winners.reserve(w.size());
    bool need_more = false;
    Word prefix;
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      prefix.push_back(w[pos]);
      const auto& entry = pool_.at(prefix);
      const auto& votes = entry.votes;
      if (entry.reported) {
        const Output& incumbent = *entry.reported;
        auto inc_it = votes.find(incumbent);
        const int inc_n = inc_it == votes.end() ? 0 : inc_it->second;
        const Output* challenger = nullptr;
        int chal_n = 0;
        for (const auto& [o, n] : votes)
          if (o != incumbent && n > chal_n) {
            chal_n = n;
            challenger = &o;
          }
        winners.push_back(challenger && chal_n - inc_n >= cfg_.vote_margin
                              ? *challenger
                              : incumbent);
        continue;
      }
      int best = 0, second = 0;
      const Output* leader = nullptr;
      bool tie = false;
      for (const auto& [o, n] : votes) {
        if (n > best) {
          second = best;
          best = n;
          leader = &o;
          tie = false;
        } else if (n == best) {
          second = std::max(second, n);
          tie = true;
        } else {
          second = std::max(second, n);
        }
      }
      if (best - second < cfg_.vote_margin) {
        if (target < cap) {
          ++target;
          need_more = true;
          break;
        }
        // Out of passes. A unique leader is still the best available answer;
        // commit it and let future traffic through this prefix overrule it if
        // it was noise. An outright tie carries no information at all.
        if (tie)
          throw NonDeterministicResponse(
              "no leading output for input '" + w[pos] + "' in word '" +
                  to_string(w) + "' after " + std::to_string(passes) +
                  " passes",
              w, pos, votes);
      }
      winners.push_back(*leader);
    }
    if (need_more) continue;

    // Commit. Overturning an earlier verdict bumps the revision counter so
    // learners rebuild what they derived from the old answer.
    prefix.clear();
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      prefix.push_back(w[pos]);
      auto& entry = pool_.at(prefix);
      if (entry.reported && *entry.reported != winners[pos]) ++revision_;
      entry.reported = winners[pos];
    }
    return winners;
  }
}

std::vector<Output> DenoisingOracle::query(const Word& w) {
  if (w.empty()) return {};
  return cfg_.vote_mode == VoteMode::InSession ? query_in_session(w)
                                               : query_whole_word(w);
}

}  // namespace quiclearn
