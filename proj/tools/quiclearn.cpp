// Command-line frontend: learn a model from the simulated or a remote
// target, serve the simulator over TCP, or diff two saved models.
//
// Exit codes: 0 success (diff: equivalent), 1 diff found a difference,
// 2 usage/model/non-determinism errors, 3 connection errors.

#include <csignal>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "quiclearn/dot.hpp"
#include "quiclearn/eq_oracles.hpp"
#include "quiclearn/line_protocol.hpp"
#include "quiclearn/lstar.hpp"
#include "quiclearn/mapper.hpp"
#include "quiclearn/reference_models.hpp"

namespace {

using namespace quiclearn;

constexpr int kExitOk = 0;
constexpr int kExitDifferent = 1;
constexpr int kExitError = 2;
constexpr int kExitConnection = 3;

struct LearnOptions {
  std::string alphabet = "minimal";
  std::string sul = "sim";
  std::uint64_t eq_queries = 100;
  std::size_t min_len = 5;
  std::size_t max_len = 10;
  std::size_t repeats = 3;
  std::string vote = "revote";
  double noise_retx = 0.0;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string stats;
  std::string filters;
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

// "socket:HOST:PORT" -> (HOST, PORT)
std::pair<std::string, std::uint16_t> parse_socket_spec(
    const std::string& spec) {
  auto rest = spec.substr(std::string("socket:").size());
  auto colon = rest.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= rest.size())
    throw CLI::ValidationError("--sul", "want socket:HOST:PORT, got " + spec);
  int port = 0;
  try {
    port = std::stoi(rest.substr(colon + 1));
  } catch (const std::exception&) {
    port = -1;
  }
  if (port <= 0 || port > 65535)
    throw CLI::ValidationError("--sul", "bad port in " + spec);
  return {rest.substr(0, colon), static_cast<std::uint16_t>(port)};
}

int run_learn(const LearnOptions& opt) {
  std::vector<Symbol> alphabet =
      opt.alphabet == "extended" ? extended_alphabet() : minimal_alphabet();

  DenoiseConfig dc;
  dc.vote_repeats = opt.repeats;
  dc.vote_mode =
      opt.vote == "in-session" ? VoteMode::InSession : VoteMode::WholeWordRevote;
  if (!opt.filters.empty()) dc.filters = load_filter_file(opt.filters);

  std::unique_ptr<AbstractSul> sul;
  if (opt.sul == "sim") {
    QuicSimServer::Config sc;
    sc.noise_retx = opt.noise_retx;
    sc.seed = opt.seed;
    sul = std::make_unique<SimAbstractSul>(sc);
  } else {
    auto [host, port] = parse_socket_spec(opt.sul);
    sul = std::make_unique<SocketAbstractSul>(host, port);
  }

  DenoisingOracle oracle(*sul, dc);
  RandomEqConfig ec;
  ec.num_queries = opt.eq_queries;
  ec.min_len = opt.min_len;
  ec.max_len = opt.max_len;
  ec.seed = opt.seed;
  RandomWordOracle eq(ec);

  auto t0 = std::chrono::steady_clock::now();
  auto result = learn(oracle, alphabet, eq);
  auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();

  write_text(opt.out, to_dot(result.machine));
  if (!opt.stats.empty()) {
    nlohmann::ordered_json j;
    j["membership_queries"] = result.stats.membership_queries;
    j["equivalence_queries"] = result.stats.equivalence_queries;
    j["refinement_rounds"] = result.stats.refinement_rounds;
    j["total_input_symbols_sent"] = result.stats.total_input_symbols_sent;
    j["states"] = result.machine.state_count();
    j["wall_time_ms"] = wall;
    j["config"] = {{"alphabet", opt.alphabet},
                   {"sul", opt.sul},
                   {"eq_queries", opt.eq_queries},
                   {"min_len", opt.min_len},
                   {"max_len", opt.max_len},
                   {"repeats", opt.repeats},
                   {"vote", opt.vote},
                   {"noise_retx", opt.noise_retx},
                   {"seed", opt.seed}};
    write_text(opt.stats, j.dump(2) + "\n");
  }
  return kExitOk;
}

int run_diff(const std::string& path_a, const std::string& path_b) {
  auto load = [](const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return from_dot(buf.str());
  };
  auto a = load(path_a);
  auto b = load(path_b);
  auto witness = equivalent(a, b);
  if (!witness) {
    std::cout << "equivalent\n";
    return kExitOk;
  }
  std::cout << to_string(*witness) << "\n";
  return kExitDifferent;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGPIPE, SIG_IGN);

  CLI::App app{"Active model learning for a QUIC-style handshake server"};
  app.require_subcommand(1);

  LearnOptions lopt;
  auto* learn_cmd =
      app.add_subcommand("learn", "Learn a model and write it as DOT");
  learn_cmd->add_option("--alphabet", lopt.alphabet)
      ->check(CLI::IsMember({"minimal", "extended"}))
      ->envname("QUICLEARN_ALPHABET")
      ->capture_default_str();
  learn_cmd->add_option("--sul", lopt.sul, "sim or socket:HOST:PORT")
      ->envname("QUICLEARN_SUL")
      ->capture_default_str();
  learn_cmd->add_option("--eq-queries", lopt.eq_queries)
      ->check(CLI::PositiveNumber)
      ->envname("QUICLEARN_EQ_QUERIES")
      ->capture_default_str();
  learn_cmd->add_option("--min-len", lopt.min_len)
      ->check(CLI::PositiveNumber)
      ->envname("QUICLEARN_MIN_LEN")
      ->capture_default_str();
  learn_cmd->add_option("--max-len", lopt.max_len)
      ->check(CLI::PositiveNumber)
      ->envname("QUICLEARN_MAX_LEN")
      ->capture_default_str();
  learn_cmd->add_option("--repeats", lopt.repeats, "votes per answer (odd)")
      ->envname("QUICLEARN_REPEATS")
      ->capture_default_str();
  learn_cmd->add_option("--vote", lopt.vote)
      ->check(CLI::IsMember({"in-session", "revote"}))
      ->envname("QUICLEARN_VOTE")
      ->capture_default_str();
  learn_cmd->add_option("--noise-retx", lopt.noise_retx,
                        "simulator retransmission probability")
      ->check(CLI::Range(0.0, 1.0))
      ->envname("QUICLEARN_NOISE_RETX")
      ->capture_default_str();
  learn_cmd->add_option("--seed", lopt.seed)
      ->envname("QUICLEARN_SEED")
      ->capture_default_str();
  learn_cmd->add_option("--out", lopt.out, "DOT output path, - for stdout")
      ->envname("QUICLEARN_OUT")
      ->capture_default_str();
  learn_cmd->add_option("--stats", lopt.stats, "stats JSON path, - for stdout")
      ->envname("QUICLEARN_STATS");
  learn_cmd->add_option("--filters", lopt.filters,
                        "response filter rules file")
      ->envname("QUICLEARN_FILTERS");

  std::string serve_host = "127.0.0.1";
  std::uint16_t serve_port = 4433;
  double serve_noise = 0.0;
  std::uint64_t serve_seed = 0;
  auto* serve_cmd = app.add_subcommand(
      "serve-sul", "Expose the simulated server over the line protocol");
  serve_cmd->add_option("--host", serve_host)
      ->envname("QUICLEARN_HOST")
      ->capture_default_str();
  serve_cmd->add_option("--port", serve_port, "0 picks a free port")
      ->envname("QUICLEARN_PORT")
      ->capture_default_str();
  serve_cmd->add_option("--noise-retx", serve_noise)
      ->check(CLI::Range(0.0, 1.0))
      ->envname("QUICLEARN_NOISE_RETX")
      ->capture_default_str();
  serve_cmd->add_option("--seed", serve_seed)
      ->envname("QUICLEARN_SEED")
      ->capture_default_str();

  std::string diff_a, diff_b;
  auto* diff_cmd =
      app.add_subcommand("diff", "Compare two DOT models for equivalence");
  diff_cmd->add_option("a", diff_a, "first model")->required();
  diff_cmd->add_option("b", diff_b, "second model")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (learn_cmd->parsed()) return run_learn(lopt);
    if (diff_cmd->parsed()) return run_diff(diff_a, diff_b);
    // serve-sul
    QuicSimServer::Config sc;
    sc.noise_retx = serve_noise;
    sc.seed = serve_seed;
    LineSulServer server(serve_host, serve_port, sc);
    std::cout << "listening on " << serve_host << ":" << server.port()
              << std::endl;
    server.run();
    return kExitOk;
  } catch (const SocketError& e) {
    std::cerr << "connection error: " << e.what() << "\n";
    return kExitConnection;
  } catch (const NonDeterministicResponse& e) {
    std::cerr << "non-deterministic response: " << e.what() << "\n";
    return kExitError;
  } catch (const LearnError& e) {
    std::cerr << "learning failed: " << e.what() << "\n";
    return kExitError;
  } catch (const DotParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
