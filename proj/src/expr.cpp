#include "mpvc/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

namespace mpvc {

namespace {

using Node = Expression::Node;
using Kind = Node::Kind;

double pow_int(double base, int e) {
  // binary exponentiation; 0^0 = 1 by convention
  double r = 1.0, b = base;
  for (int k = e; k > 0; k >>= 1) {
    if (k & 1) r *= b;
    b *= b;
  }
  return r;
}

[[noreturn]] void domain_err(const Node& n, const std::string& what) {
  std::ostringstream os;
  os << what;
  if (n.line > 0) os << " (line " << n.line << ", col " << n.col << ")";
  throw Error(ErrorCode::DomainError, os.str());
}

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Sin: return "sin";
    case FuncKind::Cos: return "cos";
    case FuncKind::Exp: return "exp";
    case FuncKind::Log: return "log";
    case FuncKind::Sqrt: return "sqrt";
  }
  return "?";
}

}  // namespace

Expression Expression::constant(double v, int arity) {
  Expression e;
  e.arity_ = arity;
  Node n;
  n.kind = Kind::Constant;
  n.value = v;
  e.nodes_.push_back(n);
  e.root_ = 0;
  return e;
}

Expression Expression::variable(int index, int arity) {
  Expression e;
  e.arity_ = arity;
  Node n;
  n.kind = Kind::Variable;
  n.var = index;
  e.nodes_.push_back(n);
  e.root_ = 0;
  return e;
}

int Expression::add_node(Node n) {
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

double eval(const Expression& e, const Eigen::VectorXd& x) {
  if (x.size() != e.arity())
    throw Error(ErrorCode::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) +
                    ", expression expects " + std::to_string(e.arity()));
  const auto& nodes = e.nodes();
  std::vector<double> v(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    switch (n.kind) {
      case Kind::Constant: v[i] = n.value; break;
      case Kind::Variable: v[i] = x[n.var]; break;
      case Kind::Add: v[i] = v[n.a] + v[n.b]; break;
      case Kind::Sub: v[i] = v[n.a] - v[n.b]; break;
      case Kind::Mul: v[i] = v[n.a] * v[n.b]; break;
      case Kind::Div:
        if (v[n.b] == 0.0) domain_err(n, "division by zero");
        v[i] = v[n.a] / v[n.b];
        break;
      case Kind::Pow: v[i] = pow_int(v[n.a], n.exponent); break;
      case Kind::Neg: v[i] = -v[n.a]; break;
      case Kind::Func:
        switch (n.fn) {
          case FuncKind::Sin: v[i] = std::sin(v[n.a]); break;
          case FuncKind::Cos: v[i] = std::cos(v[n.a]); break;
          case FuncKind::Exp: v[i] = std::exp(v[n.a]); break;
          case FuncKind::Log:
            if (v[n.a] <= 0.0) domain_err(n, "log of nonpositive value");
            v[i] = std::log(v[n.a]);
            break;
          case FuncKind::Sqrt:
            if (v[n.a] < 0.0) domain_err(n, "sqrt of negative value");
            v[i] = std::sqrt(v[n.a]);
            break;
        }
        break;
    }
  }
  return v[e.root()];
}

std::pair<double, Eigen::VectorXd> eval_with_grad(const Expression& e,
                                                  const Eigen::VectorXd& x) {
  if (x.size() != e.arity())
    throw Error(ErrorCode::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) +
                    ", expression expects " + std::to_string(e.arity()));
  const auto& nodes = e.nodes();
  const int n_var = e.arity();
  std::vector<double> v(nodes.size());
  // forward mode: carry the full derivative vector per node
  std::vector<Eigen::VectorXd> d(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    switch (n.kind) {
      case Kind::Constant:
        v[i] = n.value;
        d[i] = Eigen::VectorXd::Zero(n_var);
        break;
      case Kind::Variable:
        v[i] = x[n.var];
        d[i] = Eigen::VectorXd::Zero(n_var);
        d[i][n.var] = 1.0;
        break;
      case Kind::Add:
        v[i] = v[n.a] + v[n.b];
        d[i] = d[n.a] + d[n.b];
        break;
      case Kind::Sub:
        v[i] = v[n.a] - v[n.b];
        d[i] = d[n.a] - d[n.b];
        break;
      case Kind::Mul:
        v[i] = v[n.a] * v[n.b];
        d[i] = v[n.b] * d[n.a] + v[n.a] * d[n.b];
        break;
      case Kind::Div: {
        if (v[n.b] == 0.0) domain_err(n, "division by zero");
        v[i] = v[n.a] / v[n.b];
        d[i] = (d[n.a] - v[i] * d[n.b]) / v[n.b];
        break;
      }
      case Kind::Pow:
        v[i] = pow_int(v[n.a], n.exponent);
        if (n.exponent == 0)
          d[i] = Eigen::VectorXd::Zero(n_var);
        else
          d[i] = n.exponent * pow_int(v[n.a], n.exponent - 1) * d[n.a];
        break;
      case Kind::Neg:
        v[i] = -v[n.a];
        d[i] = -d[n.a];
        break;
      case Kind::Func:
        switch (n.fn) {
          case FuncKind::Sin:
            v[i] = std::sin(v[n.a]);
            d[i] = std::cos(v[n.a]) * d[n.a];
            break;
          case FuncKind::Cos:
            v[i] = std::cos(v[n.a]);
            d[i] = -std::sin(v[n.a]) * d[n.a];
            break;
          case FuncKind::Exp:
            v[i] = std::exp(v[n.a]);
            d[i] = v[i] * d[n.a];
            break;
          case FuncKind::Log:
            if (v[n.a] <= 0.0) domain_err(n, "log of nonpositive value");
            v[i] = std::log(v[n.a]);
            d[i] = d[n.a] / v[n.a];
            break;
          case FuncKind::Sqrt:
            if (v[n.a] < 0.0) domain_err(n, "sqrt of negative value");
            if (v[n.a] == 0.0)
              domain_err(n, "sqrt derivative undefined at zero");
            v[i] = std::sqrt(v[n.a]);
            d[i] = d[n.a] / (2.0 * v[i]);
            break;
        }
        break;
    }
  }
  return {v[e.root()], d[e.root()]};
}

Eigen::VectorXd grad(const Expression& e, const Eigen::VectorXd& x) {
  return eval_with_grad(e, x).second;
}

namespace {

// Bottom-up polynomial degree with constant folding. BIG marks
// non-polynomial subtrees.
constexpr int kBigDegree = 1 << 20;

struct DegInfo {
  bool is_const = false;
  double value = 0.0;
  int deg = kBigDegree;
};

}  // namespace

CurvatureTag classify_curvature(const Expression& e) {
  const auto& nodes = e.nodes();
  if (nodes.empty()) return CurvatureTag::General;
  std::vector<DegInfo> info(nodes.size());
  auto cap = [](long long d) {
    return static_cast<int>(std::min<long long>(d, kBigDegree));
  };
  for (size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    DegInfo r;
    switch (n.kind) {
      case Kind::Constant: r = {true, n.value, 0}; break;
      case Kind::Variable: r = {false, 0.0, 1}; break;
      case Kind::Add:
      case Kind::Sub: {
        const DegInfo &a = info[n.a], &b = info[n.b];
        if (a.is_const && b.is_const) {
          r = {true, n.kind == Kind::Add ? a.value + b.value : a.value - b.value, 0};
        } else {
          r.deg = std::max(a.deg, b.deg);
        }
        break;
      }
      case Kind::Mul: {
        const DegInfo &a = info[n.a], &b = info[n.b];
        if ((a.is_const && a.value == 0.0) || (b.is_const && b.value == 0.0)) {
          r = {true, 0.0, 0};
        } else if (a.is_const && b.is_const) {
          r = {true, a.value * b.value, 0};
        } else if (a.is_const) {
          r.deg = b.deg;
        } else if (b.is_const) {
          r.deg = a.deg;
        } else {
          r.deg = cap(static_cast<long long>(a.deg) + b.deg);
        }
        break;
      }
      case Kind::Div: {
        const DegInfo &a = info[n.a], &b = info[n.b];
        if (b.is_const && b.value != 0.0) {
          if (a.is_const)
            r = {true, a.value / b.value, 0};
          else
            r.deg = a.deg;
        } else {
          r.deg = kBigDegree;
        }
        break;
      }
      case Kind::Pow: {
        const DegInfo& a = info[n.a];
        if (n.exponent == 0) {
          r = {true, 1.0, 0};
        } else if (a.is_const) {
          r = {true, pow_int(a.value, n.exponent), 0};
        } else {
          r.deg = cap(static_cast<long long>(a.deg) * n.exponent);
        }
        break;
      }
      case Kind::Neg: {
        const DegInfo& a = info[n.a];
        if (a.is_const)
          r = {true, -a.value, 0};
        else
          r.deg = a.deg;
        break;
      }
      case Kind::Func: {
        const DegInfo& a = info[n.a];
        if (a.is_const) {
          double v = 0.0;
          switch (n.fn) {
            case FuncKind::Sin: v = std::sin(a.value); break;
            case FuncKind::Cos: v = std::cos(a.value); break;
            case FuncKind::Exp: v = std::exp(a.value); break;
            case FuncKind::Log: v = std::log(a.value); break;
            case FuncKind::Sqrt: v = std::sqrt(a.value); break;
          }
          if (std::isfinite(v))
            r = {true, v, 0};
          else
            r.deg = kBigDegree;
        } else {
          r.deg = kBigDegree;
        }
        break;
      }
    }
    info[i] = r;
  }
  return info[e.root()].deg <= 1 ? CurvatureTag::Linear : CurvatureTag::General;
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Type { Ident, Number, Op, End };
  Type type{Type::End};
  std::string text;
  double number = 0.0;
  int line = 0, col = 0;
};

class Lexer {
 public:
  Lexer(const std::string& s, int line) : s_(s), line_(line) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << msg << " at line " << line_ << ", col " << (tok_.col ? tok_.col : pos_ + 1);
    throw Error(ErrorCode::SyntaxError, os.str());
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = static_cast<int>(pos_) + 1;
    if (pos_ >= s_.size()) {
      tok_.type = Token::Type::End;
      return;
    }
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      tok_.type = Token::Type::Ident;
      tok_.text = s_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < s_.size() &&
         std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      tok_.type = Token::Type::Number;
      tok_.number = v;
      tok_.text = std::string(begin, static_cast<size_t>(end - begin));
      pos_ += static_cast<size_t>(end - begin);
      return;
    }
    tok_.type = Token::Type::Op;
    tok_.text = std::string(1, c);
    ++pos_;
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_;
  Token tok_;
};

class ExprParser {
 public:
  ExprParser(Lexer& lex, const std::map<std::string, int>& vars, int arity)
      : lex_(lex), vars_(vars), arity_(arity) {
    out_.set_arity(arity_);
  }

  Expression parse() {
    int root = parse_sum();
    out_.set_root(root);
    return std::move(out_);
  }

 private:
  bool is_op(const char* t) const {
    return lex_.peek().type == Token::Type::Op && lex_.peek().text == t;
  }

  int make(Node n, const Token& at) {
    n.line = at.line;
    n.col = at.col;
    return out_.add_node(n);
  }

  int parse_sum() {
    int lhs = parse_term();
    while (is_op("+") || is_op("-")) {
      Token op = lex_.next();
      int rhs = parse_term();
      Node n;
      n.kind = op.text == "+" ? Kind::Add : Kind::Sub;
      n.a = lhs;
      n.b = rhs;
      lhs = make(n, op);
    }
    return lhs;
  }

  int parse_term() {
    int lhs = parse_unary();
    while (is_op("*") || is_op("/")) {
      Token op = lex_.next();
      int rhs = parse_unary();
      Node n;
      n.kind = op.text == "*" ? Kind::Mul : Kind::Div;
      n.a = lhs;
      n.b = rhs;
      lhs = make(n, op);
    }
    return lhs;
  }

  int parse_unary() {
    if (is_op("-")) {
      Token op = lex_.next();
      int child = parse_unary();
      Node n;
      n.kind = Kind::Neg;
      n.a = child;
      return make(n, op);
    }
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    while (is_op("^")) {
      Token op = lex_.next();
      const Token& t = lex_.peek();
      if (t.type != Token::Type::Number) lex_.fail("expected integer exponent after '^'");
      double v = t.number;
      int e = static_cast<int>(v);
      if (v != static_cast<double>(e) || e < 0)
        lex_.fail("exponent must be a nonnegative integer");
      lex_.next();
      Node n;
      n.kind = Kind::Pow;
      n.a = base;
      n.exponent = e;
      base = make(n, op);
    }
    return base;
  }

  int parse_primary() {
    const Token& t = lex_.peek();
    if (t.type == Token::Type::Number) {
      Token num = lex_.next();
      Node n;
      n.kind = Kind::Constant;
      n.value = num.number;
      return make(n, num);
    }
    if (t.type == Token::Type::Ident) {
      Token id = lex_.next();
      if (is_op("(")) {
        FuncKind fn;
        if (id.text == "sin") fn = FuncKind::Sin;
        else if (id.text == "cos") fn = FuncKind::Cos;
        else if (id.text == "exp") fn = FuncKind::Exp;
        else if (id.text == "log") fn = FuncKind::Log;
        else if (id.text == "sqrt") fn = FuncKind::Sqrt;
        else
          throw Error(ErrorCode::UnknownIdentifier,
                      "unknown function '" + id.text + "' at line " +
                          std::to_string(id.line) + ", col " + std::to_string(id.col));
        lex_.next();  // '('
        int child = parse_sum();
        if (!is_op(")")) lex_.fail("expected ')'");
        lex_.next();
        Node n;
        n.kind = Kind::Func;
        n.fn = fn;
        n.a = child;
        return make(n, id);
      }
      auto it = vars_.find(id.text);
      if (it == vars_.end())
        throw Error(ErrorCode::UnknownIdentifier,
                    "unknown identifier '" + id.text + "' at line " +
                        std::to_string(id.line) + ", col " + std::to_string(id.col));
      Node n;
      n.kind = Kind::Variable;
      n.var = it->second;
      return make(n, id);
    }
    if (is_op("(")) {
      lex_.next();
      int inner = parse_sum();
      if (!is_op(")")) lex_.fail("expected ')'");
      lex_.next();
      return inner;
    }
    lex_.fail("expected expression");
  }

  Lexer& lex_;
  const std::map<std::string, int>& vars_;
  int arity_;
  Expression out_;
};

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

ProblemInstance parse_problem(const std::string& text) {
  ProblemInstance prob;
  std::map<std::string, int> vars;
  bool saw_vars = false, saw_minimize = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    if (blank(line)) continue;

    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::SyntaxError,
                  "expected '<keyword>: ...' at line " + std::to_string(line_no));
    std::string head = line.substr(0, colon);
    // trim
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.front())))
      head.erase(head.begin());
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back())))
      head.pop_back();
    std::string rest = line.substr(colon + 1);

    if (head == "vars") {
      if (saw_vars)
        throw Error(ErrorCode::SyntaxError,
                    "duplicate 'vars' line at line " + std::to_string(line_no));
      Lexer lex(rest, line_no);
      while (lex.peek().type == Token::Type::Ident) {
        Token id = lex.next();
        if (vars.count(id.text))
          throw Error(ErrorCode::SyntaxError,
                      "duplicate variable '" + id.text + "' at line " +
                          std::to_string(line_no));
        vars[id.text] = static_cast<int>(prob.var_names.size());
        prob.var_names.push_back(id.text);
      }
      if (lex.peek().type != Token::Type::End) lex.fail("expected variable name");
      if (prob.var_names.empty())
        throw Error(ErrorCode::SyntaxError,
                    "'vars' line declares no variables at line " +
                        std::to_string(line_no));
      prob.n = static_cast<int>(prob.var_names.size());
      saw_vars = true;
      continue;
    }

    if (!saw_vars)
      throw Error(ErrorCode::SyntaxError,
                  "'vars' must be the first non-comment line (line " +
                      std::to_string(line_no) + ")");

    if (head == "minimize") {
      if (saw_minimize)
        throw Error(ErrorCode::SyntaxError,
                    "duplicate 'minimize' line at line " + std::to_string(line_no));
      Lexer lex(rest, line_no);
      ExprParser p(lex, vars, prob.n);
      prob.objective = p.parse();
      if (lex.peek().type != Token::Type::End) lex.fail("trailing input");
      saw_minimize = true;
      continue;
    }

    if (head == "g") {
      Lexer lex(rest, line_no);
      ExprParser p(lex, vars, prob.n);
      Expression e = p.parse();
      bool concave = false;
      if (lex.peek().type == Token::Type::Op && lex.peek().text == "@") {
        lex.next();
        Token ann = lex.next();
        if (ann.type != Token::Type::Ident || ann.text != "concave")
          lex.fail("unknown annotation");
        concave = true;
      }
      if (lex.peek().type != Token::Type::End) lex.fail("trailing input");
      CurvatureTag tag = classify_curvature(e);
      if (tag != CurvatureTag::Linear && concave) tag = CurvatureTag::DeclaredConcave;
      prob.g.push_back(std::move(e));
      prob.g_tags.push_back(tag);
      continue;
    }

    if (head == "h") {
      Lexer lex(rest, line_no);
      ExprParser p(lex, vars, prob.n);
      Expression e = p.parse();
      if (lex.peek().type != Token::Type::End) lex.fail("trailing input");
      prob.h_tags.push_back(classify_curvature(e));
      prob.h.push_back(std::move(e));
      continue;
    }

    if (head == "vanish") {
      Lexer lex(rest, line_no);
      auto expect_ident = [&](const char* name) {
        if (lex.peek().type != Token::Type::Ident || lex.peek().text != name)
          throw Error(ErrorCode::MissingPairPart,
                      std::string("vanishing pair missing ") + name + " at line " +
                          std::to_string(line_no));
        lex.next();
      };
      expect_ident("H");
      if (!(lex.peek().type == Token::Type::Op && lex.peek().text == "="))
        lex.fail("expected '=' after H");
      lex.next();
      ExprParser ph(lex, vars, prob.n);
      Expression He = ph.parse();
      if (!(lex.peek().type == Token::Type::Op && lex.peek().text == ","))
        throw Error(ErrorCode::MissingPairPart,
                    "vanishing pair missing G at line " + std::to_string(line_no));
      lex.next();
      expect_ident("G");
      if (!(lex.peek().type == Token::Type::Op && lex.peek().text == "="))
        lex.fail("expected '=' after G");
      lex.next();
      ExprParser pg(lex, vars, prob.n);
      Expression Ge = pg.parse();
      if (lex.peek().type != Token::Type::End) lex.fail("trailing input");
      prob.H_tags.push_back(classify_curvature(He));
      prob.G_tags.push_back(classify_curvature(Ge));
      prob.vanish.push_back(VanishPair{std::move(He), std::move(Ge)});
      continue;
    }

    throw Error(ErrorCode::SyntaxError,
                "unknown directive '" + head + "' at line " + std::to_string(line_no));
  }

  if (!saw_vars)
    throw Error(ErrorCode::SyntaxError, "missing 'vars' line");
  if (!saw_minimize)
    throw Error(ErrorCode::SyntaxError, "missing 'minimize' line");
  prob.objective_tag = classify_curvature(prob.objective);
  return prob;
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace {

// precedence levels: sum=1, product=2, unary=3, power=4, atom=5
void print_node(std::ostringstream& os, const Expression& e, int idx, int parent_prec,
                const std::vector<std::string>& names) {
  const Node& n = e.nodes()[idx];
  auto wrap = [&](int prec, auto&& body) {
    if (prec < parent_prec) {
      os << "(";
      body();
      os << ")";
    } else {
      body();
    }
  };
  switch (n.kind) {
    case Kind::Constant: {
      if (n.value < 0) {
        wrap(3, [&] {
          std::ostringstream tmp;
          tmp.precision(17);
          tmp << n.value;
          os << tmp.str();
        });
      } else {
        std::ostringstream tmp;
        tmp.precision(17);
        tmp << n.value;
        os << tmp.str();
      }
      break;
    }
    case Kind::Variable:
      os << (n.var < static_cast<int>(names.size()) ? names[n.var]
                                                    : "x" + std::to_string(n.var));
      break;
    case Kind::Add:
      wrap(1, [&] {
        print_node(os, e, n.a, 1, names);
        os << " + ";
        print_node(os, e, n.b, 2, names);
      });
      break;
    case Kind::Sub:
      wrap(1, [&] {
        print_node(os, e, n.a, 1, names);
        os << " - ";
        print_node(os, e, n.b, 2, names);
      });
      break;
    case Kind::Mul:
      wrap(2, [&] {
        print_node(os, e, n.a, 2, names);
        os << "*";
        print_node(os, e, n.b, 3, names);
      });
      break;
    case Kind::Div:
      wrap(2, [&] {
        print_node(os, e, n.a, 2, names);
        os << "/";
        print_node(os, e, n.b, 3, names);
      });
      break;
    case Kind::Neg:
      wrap(3, [&] {
        os << "-";
        print_node(os, e, n.a, 3, names);
      });
      break;
    case Kind::Pow:
      wrap(4, [&] {
        print_node(os, e, n.a, 5, names);
        os << "^" << n.exponent;
      });
      break;
    case Kind::Func:
      os << func_name(n.fn) << "(";
      print_node(os, e, n.a, 1, names);
      os << ")";
      break;
  }
}

}  // namespace

std::string to_string(const Expression& e, const std::vector<std::string>& names) {
  std::ostringstream os;
  print_node(os, e, e.root(), 1, names);
  return os.str();
}

std::string problem_to_text(const ProblemInstance& prob) {
  std::ostringstream os;
  os << "vars:";
  for (const auto& v : prob.var_names) os << " " << v;
  os << "\nminimize: " << to_string(prob.objective, prob.var_names) << "\n";
  for (int i = 0; i < prob.m(); ++i) {
    os << "g: " << to_string(prob.g[i], prob.var_names);
    if (prob.g_tags[i] == CurvatureTag::DeclaredConcave) os << " @concave";
    os << "\n";
  }
  for (const auto& h : prob.h) os << "h: " << to_string(h, prob.var_names) << "\n";
  for (const auto& vp : prob.vanish)
    os << "vanish: H = " << to_string(vp.H, prob.var_names)
       << ", G = " << to_string(vp.G, prob.var_names) << "\n";
  return os.str();
}

}  // namespace mpvc
