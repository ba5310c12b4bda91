#include <sstream>

#include "phfl/syntax.hpp"

namespace phfl {

namespace {

// Precedence levels: 0 iff, 1 implication, 2 or, 3 and, 4 unary and
// binders, 5 application, 6 atoms. Binders extend to the right, so they
// are printed bare only at level 0.
class Printer {
 public:
  std::string str() const { return out_.str(); }

  void print(const Formula& f, int ctx) {
    Formula l, r, body;
    Sym act;
    int idx;
    if (is_ff(f)) {
      out_ << "ff";
      return;
    }
    if (is_tt(f)) {
      out_ << "tt";
      return;
    }
    if (match_iff(f, l, r)) return binop(l, " <=> ", r, 0, 1, 1, ctx);
    if (match_and(f, l, r)) return binop(l, " /\\ ", r, 3, 3, 4, ctx);
    if (match_box(f, act, idx, body)) {
      open(4, ctx);
      out_ << '[' << name_of(act) << '@' << idx << "] ";
      print(body, 4);
      close(4, ctx);
      return;
    }
    if (match_implies(f, l, r)) return binop(l, " => ", r, 1, 2, 1, ctx);
    switch (f->kind) {
      case Kind::Prop:
        out_ << name_of(f->name) << '@' << f->index;
        return;
      case Kind::Lt:
        out_ << "lt";
        return;
      case Kind::LamVar:
      case Kind::FixVar:
        out_ << name_of(f->name);
        return;
      case Kind::Or:
        return binop(f->a, " \\/ ", f->b, 2, 2, 3, ctx);
      case Kind::Neg:
        open(4, ctx);
        out_ << '~';
        print(f->a, 4);
        close(4, ctx);
        return;
      case Kind::Diamond:
        open(4, ctx);
        out_ << '<' << name_of(f->name) << '@' << f->index << "> ";
        print(f->a, 4);
        close(4, ctx);
        return;
      case Kind::Subst: {
        open(4, ctx);
        out_ << '{';
        bool first = true;
        for (int i = 1; i <= f->map.arity(); ++i) {
          if (f->map(i) == i) continue;
          if (!first) out_ << ',';
          first = false;
          out_ << i << "->" << f->map(i);
        }
        out_ << "} ";
        print(f->a, 4);
        close(4, ctx);
        return;
      }
      case Kind::App:
        open(5, ctx);
        print(f->a, 5);
        out_ << ' ';
        print(f->b, 6);
        close(5, ctx);
        return;
      case Kind::Lambda:
      case Kind::Mu:
      case Kind::Nu: {
        bool paren = ctx > 0;
        if (paren) out_ << '(';
        if (f->kind == Kind::Lambda)
          out_ << "\\(" << name_of(f->name) << ':' << variance_char(f->variance) << to_string(f->type) << "). ";
        else
          out_ << (f->kind == Kind::Mu ? "mu (" : "nu (") << name_of(f->name) << ':' << to_string(f->type) << "). ";
        print(f->a, 0);
        if (paren) out_ << ')';
        return;
      }
    }
  }

 private:
  void open(int level, int ctx) {
    if (level < ctx) out_ << '(';
  }
  void close(int level, int ctx) {
    if (level < ctx) out_ << ')';
  }
  void binop(const Formula& l, const char* op, const Formula& r, int level, int lctx, int rctx, int ctx) {
    open(level, ctx);
    print(l, lctx);
    out_ << op;
    print(r, rctx);
    close(level, ctx);
  }

  std::ostringstream out_;
};

}  // namespace

std::string print_formula(const Formula& f) {
  Printer p;
  p.print(f, 0);
  return p.str();
}

}  // namespace phfl
