#include "amc/logic.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace amc {

namespace {

PathFormulaPtr mk(PathFormula::Kind k, PathFormulaPtr l = nullptr, PathFormulaPtr r = nullptr) {
  auto f = std::make_shared<PathFormula>();
  f->kind = k;
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

StateFormulaPtr mks(StateFormula::Kind k, StateFormulaPtr l = nullptr, StateFormulaPtr r = nullptr) {
  auto f = std::make_shared<StateFormula>();
  f->kind = k;
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

}  // namespace

PathFormulaPtr path_true() { return mk(PathFormula::Kind::True); }

PathFormulaPtr path_prop(PropId p) {
  auto f = std::make_shared<PathFormula>();
  f->kind = PathFormula::Kind::Prop;
  f->prop = p;
  return f;
}

PathFormulaPtr path_state(StateFormulaPtr s) {
  auto f = std::make_shared<PathFormula>();
  f->kind = PathFormula::Kind::State;
  f->state = std::move(s);
  return f;
}

PathFormulaPtr path_not(PathFormulaPtr f) { return mk(PathFormula::Kind::Not, std::move(f)); }

PathFormulaPtr path_and(PathFormulaPtr a, PathFormulaPtr b) {
  return mk(PathFormula::Kind::And, std::move(a), std::move(b));
}

PathFormulaPtr path_or(PathFormulaPtr a, PathFormulaPtr b) {
  return path_not(path_and(path_not(std::move(a)), path_not(std::move(b))));
}

PathFormulaPtr path_next(PathFormulaPtr f) { return mk(PathFormula::Kind::Next, std::move(f)); }

PathFormulaPtr path_until(PathFormulaPtr a, PathFormulaPtr b) {
  return mk(PathFormula::Kind::Until, std::move(a), std::move(b));
}

PathFormulaPtr path_eventually(PathFormulaPtr f) { return path_until(path_true(), std::move(f)); }

PathFormulaPtr path_always(PathFormulaPtr f) {
  return path_not(path_eventually(path_not(std::move(f))));
}

PathFormulaPtr path_release(PathFormulaPtr a, PathFormulaPtr b) {
  return path_not(path_until(path_not(std::move(a)), path_not(std::move(b))));
}

StateFormulaPtr state_true() { return mks(StateFormula::Kind::True); }

StateFormulaPtr state_prop(PropId p) {
  auto f = std::make_shared<StateFormula>();
  f->kind = StateFormula::Kind::Prop;
  f->prop = p;
  return f;
}

StateFormulaPtr state_not(StateFormulaPtr f) { return mks(StateFormula::Kind::Not, std::move(f)); }

StateFormulaPtr state_and(StateFormulaPtr a, StateFormulaPtr b) {
  return mks(StateFormula::Kind::And, std::move(a), std::move(b));
}

StateFormulaPtr state_coalition(std::vector<AgentId> agents, PathFormulaPtr body) {
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  auto f = std::make_shared<StateFormula>();
  f->kind = StateFormula::Kind::Coalition;
  f->agents = std::move(agents);
  f->body = std::move(body);
  return f;
}

namespace {

struct FormulaError : std::runtime_error {
  explicit FormulaError(const std::string& msg) : std::runtime_error("formula: " + msg) {}
};

// Recursive-descent parser over a flat token list.  Everything is parsed as a
// path formula first; the top level is then converted to a state formula,
// which rejects temporal operators outside a coalition modality.
class FormulaParser {
 public:
  FormulaParser(const std::string& text, const Amas& amas) : amas_(amas) { tokenize(text); }

  StateFormulaPtr parse() {
    PathFormulaPtr f = parse_implies();
    if (!at_end()) fail("unexpected trailing input '" + peek() + "'");
    return to_state(f);
  }

 private:
  struct Token {
    std::string text;
    bool is_word;
  };

  const Amas& amas_;
  std::vector<Token> tokens_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw FormulaError(msg); }

  void tokenize(const std::string& s) {
    size_t i = 0;
    auto word_char = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (word_char(c)) {
        size_t j = i;
        while (j < s.size() && word_char(s[j])) ++j;
        tokens_.push_back({s.substr(i, j - i), true});
        i = j;
        continue;
      }
      if (s.compare(i, 2, "<<") == 0) {
        tokens_.push_back({"<<", false});
        i += 2;
        continue;
      }
      if (s.compare(i, 2, ">>") == 0) {
        tokens_.push_back({">>", false});
        i += 2;
        continue;
      }
      if (s.compare(i, 2, "->") == 0) {
        tokens_.push_back({"->", false});
        i += 2;
        continue;
      }
      if (c == '!' || c == '&' || c == '|' || c == '(' || c == ')' || c == ',') {
        tokens_.push_back({std::string(1, c), false});
        ++i;
        continue;
      }
      fail(std::string("unexpected character '") + c + "'");
    }
  }

  bool at_end() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const {
    static const std::string kEnd = "<end>";
    return at_end() ? kEnd : tokens_[pos_].text;
  }
  bool accept(const std::string& t) {
    if (!at_end() && tokens_[pos_].text == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const std::string& t) {
    if (!accept(t)) fail("expected '" + t + "' but found '" + peek() + "'");
  }

  PathFormulaPtr parse_implies() {
    PathFormulaPtr a = parse_or();
    if (accept("->")) {
      PathFormulaPtr b = parse_implies();  // right-associative
      return path_not(path_and(a, path_not(b)));
    }
    return a;
  }

  PathFormulaPtr parse_or() {
    PathFormulaPtr a = parse_and();
    while (accept("|")) a = path_or(a, parse_and());
    return a;
  }

  PathFormulaPtr parse_and() {
    PathFormulaPtr a = parse_until();
    while (accept("&")) a = path_and(a, parse_until());
    return a;
  }

  PathFormulaPtr parse_until() {
    PathFormulaPtr a = parse_unary();
    if (accept("U")) return path_until(a, parse_until());  // right-associative
    if (accept("R")) return path_release(a, parse_until());
    return a;
  }

  PathFormulaPtr parse_unary() {
    if (accept("!")) return path_not(parse_unary());
    if (accept("X")) return path_next(parse_unary());
    if (accept("F")) return path_eventually(parse_unary());
    if (accept("G")) return path_always(parse_unary());
    if (accept("<<")) {
      std::vector<AgentId> agents;
      if (!accept(">>")) {
        do {
          if (at_end() || !tokens_[pos_].is_word) fail("expected agent name in coalition");
          const std::string name = tokens_[pos_++].text;
          auto id = amas_.agent_by_name(name);
          if (!id) fail("unknown agent '" + name + "'");
          agents.push_back(*id);
        } while (accept(","));
        expect(">>");
      }
      PathFormulaPtr body = parse_unary();
      return path_state(state_coalition(std::move(agents), std::move(body)));
    }
    return parse_primary();
  }

  PathFormulaPtr parse_primary() {
    if (accept("(")) {
      PathFormulaPtr f = parse_implies();
      expect(")");
      return f;
    }
    if (at_end() || !tokens_[pos_].is_word) fail("expected a formula but found '" + peek() + "'");
    const std::string word = tokens_[pos_++].text;
    if (word == "true") return path_true();
    if (word == "false") return path_not(path_true());
    auto p = amas_.prop_by_name(word);
    if (!p) fail("unknown proposition '" + word + "'");
    return path_prop(*p);
  }

  StateFormulaPtr to_state(const PathFormulaPtr& f) {
    switch (f->kind) {
      case PathFormula::Kind::True:
        return state_true();
      case PathFormula::Kind::Prop:
        return state_prop(f->prop);
      case PathFormula::Kind::State:
        return f->state;
      case PathFormula::Kind::Not:
        return state_not(to_state(f->lhs));
      case PathFormula::Kind::And:
        return state_and(to_state(f->lhs), to_state(f->rhs));
      case PathFormula::Kind::Next:
      case PathFormula::Kind::Until:
        fail("temporal operator outside a coalition modality");
    }
    fail("unreachable");
  }
};

bool is_false(const PathFormulaPtr& f) {
  return f->kind == PathFormula::Kind::Not && f->lhs->kind == PathFormula::Kind::True;
}

void print_path(std::ostream& os, const PathFormulaPtr& f, const Amas& amas);

void print_state(std::ostream& os, const StateFormulaPtr& f, const Amas& amas) {
  switch (f->kind) {
    case StateFormula::Kind::True:
      os << "true";
      return;
    case StateFormula::Kind::Prop:
      os << amas.prop_names.at(f->prop);
      return;
    case StateFormula::Kind::Not:
      os << "!";
      print_state(os, f->lhs, amas);
      return;
    case StateFormula::Kind::And:
      os << "(";
      print_state(os, f->lhs, amas);
      os << " & ";
      print_state(os, f->rhs, amas);
      os << ")";
      return;
    case StateFormula::Kind::Coalition: {
      os << "<<";
      for (size_t i = 0; i < f->agents.size(); ++i) {
        if (i) os << ",";
        os << amas.agents.at(f->agents[i]).name;
      }
      os << ">> ";
      print_path(os, f->body, amas);
      return;
    }
  }
}

void print_path(std::ostream& os, const PathFormulaPtr& f, const Amas& amas) {
  if (is_false(f)) {
    os << "false";
    return;
  }
  switch (f->kind) {
    case PathFormula::Kind::True:
      os << "true";
      return;
    case PathFormula::Kind::Prop:
      os << amas.prop_names.at(f->prop);
      return;
    case PathFormula::Kind::State:
      os << "(";
      print_state(os, f->state, amas);
      os << ")";
      return;
    case PathFormula::Kind::Not:
      os << "!";
      print_path(os, f->lhs, amas);
      return;
    case PathFormula::Kind::And:
      os << "(";
      print_path(os, f->lhs, amas);
      os << " & ";
      print_path(os, f->rhs, amas);
      os << ")";
      return;
    case PathFormula::Kind::Next:
      os << "X ";
      print_path(os, f->lhs, amas);
      return;
    case PathFormula::Kind::Until:
      os << "(";
      print_path(os, f->lhs, amas);
      os << " U ";
      print_path(os, f->rhs, amas);
      os << ")";
      return;
  }
}

void classify_state(const StateFormulaPtr& f, Classification& out, std::set<PropId>& props);

void classify_path(const PathFormulaPtr& f, Classification& out, std::set<PropId>& props) {
  switch (f->kind) {
    case PathFormula::Kind::True:
      return;
    case PathFormula::Kind::Prop:
      props.insert(f->prop);
      return;
    case PathFormula::Kind::State:
      out.simple = false;  // nested strategic modality
      classify_state(f->state, out, props);
      return;
    case PathFormula::Kind::Not:
      classify_path(f->lhs, out, props);
      return;
    case PathFormula::Kind::And:
      classify_path(f->lhs, out, props);
      classify_path(f->rhs, out, props);
      return;
    case PathFormula::Kind::Next:
      out.simple = false;
      classify_path(f->lhs, out, props);
      return;
    case PathFormula::Kind::Until:
      classify_path(f->lhs, out, props);
      classify_path(f->rhs, out, props);
      return;
  }
}

void classify_state(const StateFormulaPtr& f, Classification& out, std::set<PropId>& props) {
  switch (f->kind) {
    case StateFormula::Kind::True:
      return;
    case StateFormula::Kind::Prop:
      props.insert(f->prop);
      return;
    case StateFormula::Kind::Not:
      classify_state(f->lhs, out, props);
      return;
    case StateFormula::Kind::And:
      classify_state(f->lhs, out, props);
      classify_state(f->rhs, out, props);
      return;
    case StateFormula::Kind::Coalition:
      out.coalitions.push_back(f->agents);
      classify_path(f->body, out, props);
      return;
  }
}

}  // namespace

StateFormulaPtr parse_formula(const std::string& text, const Amas& amas) {
  FormulaParser parser(text, amas);
  return parser.parse();
}

std::string to_string(const StateFormulaPtr& f, const Amas& amas) {
  std::ostringstream os;
  print_state(os, f, amas);
  return os.str();
}

std::string to_string(const PathFormulaPtr& f, const Amas& amas) {
  std::ostringstream os;
  print_path(os, f, amas);
  return os.str();
}

Classification classify(const StateFormulaPtr& f) {
  Classification out;
  std::set<PropId> props;
  classify_state(f, out, props);
  out.props.assign(props.begin(), props.end());
  return out;
}

}  // namespace amc
