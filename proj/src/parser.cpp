#include "amc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace amc {
namespace {

struct Token {
  enum Kind { Ident, Punct, End } kind = End;
  std::string text;
  int line = 0, column = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
    tok_ = Token{Token::End, "", line_, col_};
    if (pos_ >= src_.size()) return;
    char c = src_[pos_];
    tok_.line = line_;
    tok_.column = col_;
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_.kind = Token::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      tok_.kind = Token::Punct;
      tok_.text = "->";
      pos_ += 2;
      col_ += 2;
      return;
    }
    tok_.kind = Token::Punct;
    tok_.text = std::string(1, c);
    ++pos_;
    ++col_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

[[noreturn]] void err(const Token& at, const std::string& msg) {
  throw ParseError(msg, at.line, at.column);
}

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Amas run() {
    while (lex_.peek().kind != Token::End) parse_agent();
    if (raw_.empty()) err(lex_.peek(), "no agents declared");
    return assemble();
  }

 private:
  struct RawState {
    std::string name;
    Token at;
    std::vector<std::string> props;
    std::optional<std::vector<std::vector<std::string>>> choices;
    std::vector<std::pair<std::string, std::string>> ons;  // event -> target
    std::vector<Token> on_ats;
  };
  struct RawAgent {
    std::string name;
    Token at;
    std::string init;
    Token init_at;
    std::vector<RawState> states;
  };

  Token expect_ident(const std::string& what) {
    Token t = lex_.take();
    if (t.kind != Token::Ident) err(t, "expected " + what);
    return t;
  }

  void expect_punct(const std::string& p) {
    Token t = lex_.take();
    if (t.kind != Token::Punct || t.text != p) err(t, "expected '" + p + "'");
  }

  bool peek_is(const std::string& p) {
    return lex_.peek().kind == Token::Punct && lex_.peek().text == p;
  }

  void parse_agent() {
    Token kw = expect_ident("'agent'");
    if (kw.text != "agent") err(kw, "expected 'agent'");
    RawAgent ag;
    Token name = expect_ident("agent name");
    ag.name = name.text;
    ag.at = name;
    expect_punct("{");
    Token ikw = expect_ident("'init'");
    if (ikw.text != "init") err(ikw, "expected 'init'");
    expect_punct(":");
    Token init = expect_ident("initial state name");
    ag.init = init.text;
    ag.init_at = init;
    expect_punct(";");
    while (!peek_is("}")) parse_state(ag);
    expect_punct("}");
    raw_.push_back(std::move(ag));
  }

  void parse_state(RawAgent& ag) {
    Token kw = expect_ident("'state'");
    if (kw.text != "state") err(kw, "expected 'state'");
    RawState st;
    Token name = expect_ident("state name");
    st.name = name.text;
    st.at = name;
    expect_punct("{");
    while (!peek_is("}")) {
      Token item = expect_ident("'props', 'choices' or 'on'");
      if (item.text == "props") {
        if (!st.props.empty()) err(item, "duplicate props list");
        expect_punct(":");
        expect_punct("[");
        while (!peek_is("]")) {
          st.props.push_back(expect_ident("proposition name").text);
          if (peek_is(",")) lex_.take();
        }
        expect_punct("]");
        expect_punct(";");
      } else if (item.text == "choices") {
        if (st.choices) err(item, "duplicate choices list");
        expect_punct(":");
        expect_punct("[");
        std::vector<std::vector<std::string>> choices;
        while (!peek_is("]")) {
          Token brace = lex_.take();
          if (brace.kind != Token::Punct || brace.text != "{") err(brace, "expected '{'");
          std::vector<std::string> choice;
          while (!peek_is("}")) {
            choice.push_back(expect_ident("event name").text);
            if (peek_is(",")) lex_.take();
          }
          Token close = lex_.take();
          if (choice.empty()) err(close, "empty choice");
          choices.push_back(std::move(choice));
          if (peek_is(",")) lex_.take();
        }
        Token close = lex_.take();
        if (choices.empty()) err(close, "empty repertoire");
        st.choices = std::move(choices);
        expect_punct(";");
      } else if (item.text == "on") {
        Token ev = expect_ident("event name");
        expect_punct("->");
        Token tgt = expect_ident("target state name");
        expect_punct(";");
        st.ons.emplace_back(ev.text, tgt.text);
        st.on_ats.push_back(ev);
      } else {
        err(item, "expected 'props', 'choices' or 'on'");
      }
    }
    expect_punct("}");
    ag.states.push_back(std::move(st));
  }

  Amas assemble() {
    Amas out;
    std::map<std::string, EventId> event_ids;
    std::map<std::string, PropId> prop_ids;

    auto intern_event = [&](const Token& at, const std::string& name) {
      if (name == kEpsilonName) err(at, std::string("reserved event name '") + kEpsilonName + "'");
      auto [it, fresh] = event_ids.try_emplace(name, static_cast<EventId>(out.event_names.size()));
      if (fresh) out.event_names.push_back(name);
      return it->second;
    };

    for (const RawAgent& rag : raw_) {
      if (rag.name == kEpsilonName)
        err(rag.at, std::string("reserved agent name '") + kEpsilonName + "'");
      AgentSpec ag;
      ag.name = rag.name;
      std::map<std::string, LocalState> state_ids;
      for (const RawState& rst : rag.states) {
        if (state_ids.count(rst.name)) err(rst.at, "duplicate state " + rst.name);
        state_ids[rst.name] = static_cast<LocalState>(ag.state_names.size());
        ag.state_names.push_back(rst.name);
      }
      if (ag.state_names.empty()) err(rag.at, "agent " + rag.name + " has no states");
      auto init_it = state_ids.find(rag.init);
      if (init_it == state_ids.end()) err(rag.init_at, "unknown initial state " + rag.init);
      ag.init = init_it->second;

      const AgentId self = static_cast<AgentId>(out.agents.size());
      for (const RawState& rst : rag.states) {
        const std::string where = "agent " + rag.name + ", state " + rst.name;

        std::vector<PropId> props;
        for (const std::string& p : rst.props) {
          auto [it, fresh] = prop_ids.try_emplace(p, static_cast<PropId>(out.prop_names.size()));
          if (fresh) {
            out.prop_names.push_back(p);
            out.prop_owner.push_back(self);
          } else if (out.prop_owner[it->second] != self) {
            err(rst.at, "proposition " + p + " already used by agent " +
                            out.agents[out.prop_owner[it->second]].name +
                            " (propositions are per-agent)");
          }
          props.push_back(it->second);
        }
        std::sort(props.begin(), props.end());
        if (std::adjacent_find(props.begin(), props.end()) != props.end())
          err(rst.at, where + ": duplicate proposition");
        ag.valuation.push_back(std::move(props));

        std::vector<std::pair<EventId, LocalState>> row;
        std::set<EventId> on_events;
        for (size_t k = 0; k < rst.ons.size(); ++k) {
          EventId e = intern_event(rst.on_ats[k], rst.ons[k].first);
          auto tgt = state_ids.find(rst.ons[k].second);
          if (tgt == state_ids.end())
            err(rst.on_ats[k], "unknown target state " + rst.ons[k].second);
          if (!on_events.insert(e).second)
            err(rst.on_ats[k], where + ": duplicate transition on " + rst.ons[k].first);
          row.emplace_back(e, tgt->second);
        }
        std::sort(row.begin(), row.end());
        ag.transitions.push_back(std::move(row));

        std::vector<Choice> rep;
        if (rst.choices) {
          for (const auto& rc : *rst.choices) {
            Choice c;
            for (const std::string& en : rc) c.events.push_back(intern_event(rst.at, en));
            std::sort(c.events.begin(), c.events.end());
            if (std::adjacent_find(c.events.begin(), c.events.end()) != c.events.end())
              err(rst.at, where + ": duplicate event in choice");
            rep.push_back(std::move(c));
          }
        } else {
          // Classic sugar: each outgoing event becomes its own singleton choice.
          std::vector<EventId> evs(on_events.begin(), on_events.end());
          rep = lift_simple(evs);
        }
        std::set<EventId> avail;
        for (const Choice& c : rep) avail.insert(c.events.begin(), c.events.end());
        if (avail.empty()) err(rst.at, where + ": empty repertoire");
        if (avail != on_events) {
          for (EventId e : avail)
            if (!on_events.count(e))
              err(rst.at, where + ": choice offers " + out.event_names[e] +
                              " but no transition is declared for it");
          for (EventId e : on_events)
            if (!avail.count(e))
              err(rst.at, where + ": transition on " + out.event_names[e] +
                              " not offered by any choice");
        }
        ag.repertoire.push_back(std::move(rep));
        ag.available.emplace_back(avail.begin(), avail.end());
      }
      out.agents.push_back(std::move(ag));
    }

    out.event_owners.assign(out.event_names.size(), {});
    for (AgentId i = 0; i < out.agent_count(); ++i) {
      std::set<EventId> mine;
      for (const auto& row : out.agents[i].available) mine.insert(row.begin(), row.end());
      for (EventId e : mine) out.event_owners[e].push_back(i);
    }
    return out;
  }

  Lexer lex_;
  std::vector<RawAgent> raw_;
};

}  // namespace

Amas parse_amas(const std::string& text, Diagnostics* diag) {
  Parser p(text);
  Amas amas = p.run();
  validate(amas, diag);
  return amas;
}

}  // namespace amc
