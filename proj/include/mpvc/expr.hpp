#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "mpvc/error.hpp"

namespace mpvc {

enum class CurvatureTag { Linear, DeclaredConcave, General };

enum class FuncKind { Sin, Cos, Exp, Log, Sqrt };

/// Scalar expression over variables x0..x(arity-1), stored as a flat node
/// arena in which children always precede their parents. Expressions are
/// immutable after construction; eval/grad are pure.
class Expression {
 public:
  struct Node {
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Func };
    Kind kind{Kind::Constant};
    double value = 0.0;  // Constant
    int var = -1;        // Variable
    int a = -1, b = -1;  // children
    int exponent = 0;    // Pow (integer >= 0)
    FuncKind fn{FuncKind::Sin};
    int line = 0, col = 0;  // source position when parsed from text
  };

  Expression() = default;

  int arity() const { return arity_; }
  int root() const { return root_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  // Builder interface; newly added nodes reference existing indices only.
  static Expression constant(double v, int arity);
  static Expression variable(int index, int arity);
  int add_node(Node n);
  void set_root(int idx) { root_ = idx; }
  void set_arity(int n) { arity_ = n; }

 private:
  std::vector<Node> nodes_;
  int root_ = -1;
  int arity_ = 0;
};

/// One vanishing pair: the constraint reads H(x) >= 0, G(x)*H(x) <= 0.
struct VanishPair {
  Expression H;
  Expression G;
};

struct ProblemInstance {
  int n = 0;  // dimension
  std::vector<std::string> var_names;
  Expression objective;
  std::vector<Expression> g;  // g_i(x) <= 0
  std::vector<Expression> h;  // h_j(x) = 0
  std::vector<VanishPair> vanish;
  CurvatureTag objective_tag{CurvatureTag::General};
  std::vector<CurvatureTag> g_tags;
  std::vector<CurvatureTag> h_tags;
  std::vector<CurvatureTag> G_tags;
  std::vector<CurvatureTag> H_tags;
  std::string name;  // optional label (registry id or file name)

  int m() const { return static_cast<int>(g.size()); }
  int p() const { return static_cast<int>(h.size()); }
  int q() const { return static_cast<int>(vanish.size()); }
};

double eval(const Expression& e, const Eigen::VectorXd& x);
Eigen::VectorXd grad(const Expression& e, const Eigen::VectorXd& x);
std::pair<double, Eigen::VectorXd> eval_with_grad(const Expression& e,
                                                  const Eigen::VectorXd& x);

CurvatureTag classify_curvature(const Expression& e);

std::string to_string(const Expression& e,
                      const std::vector<std::string>& var_names);

ProblemInstance parse_problem(const std::string& text);

/// Canonical text form: parse(problem_to_text(p)) evaluates identically to p.
std::string problem_to_text(const ProblemInstance& prob);

}  // namespace mpvc
