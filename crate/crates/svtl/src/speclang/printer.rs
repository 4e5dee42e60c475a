//! Canonical formatter. Printing then parsing returns a structurally equal
//! tree, and printing is idempotent over parse. Comments are not preserved.

use crate::kernel::{fmt_rat, CmpOp, Sort, Value};

use super::ast::*;

pub fn pretty_print(sm: &SourceModel) -> String {
    let mut p = Printer {
        out: String::new(),
        indent: 0,
    };
    p.items_block(&sm.items);
    p.out
}

// Binding strengths, loosest to tightest. A child whose strength is below
// its context is parenthesized.
const P_IMPLIES: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_UNARY: u8 = 4;
const P_CMP: u8 = 5;
const P_ADD: u8 = 6;
const P_MUL: u8 = 7;
const P_NEG: u8 = 8;
const P_ATOM: u8 = 9;

struct Printer {
    out: String,
    indent: usize,
}

impl Printer {
    fn line(&mut self, text: String) {
        for _ in 0..self.indent {
            self.out.push_str("  ");
        }
        self.out.push_str(&text);
        self.out.push('\n');
    }

    fn items_block(&mut self, items: &[Item]) {
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                self.out.push('\n');
            }
            self.item(item);
        }
    }

    fn item(&mut self, item: &Item) {
        match item {
            Item::Domain(d) => {
                let def = match &d.def {
                    DomainDef::Range(lo, hi) => format!("{lo} .. {hi}"),
                    DomainDef::Elems(vs) => {
                        let inner: Vec<String> =
                            vs.iter().map(|v| value_text(&v.value)).collect();
                        format!("{{{}}}", inner.join(", "))
                    }
                };
                self.line(format!("domain {} = {}", d.name.name, def));
            }
            Item::Alphabet(a) => {
                self.line("alphabet {".into());
                self.indent += 1;
                for e in &a.entries {
                    let mut s = pattern_text_parts(&e.head.name, &e.args);
                    if !e.binders.is_empty() {
                        s.push_str(" for ");
                        s.push_str(&binders_text(&e.binders));
                    }
                    self.line(s);
                }
                self.indent -= 1;
                self.line("}".into());
            }
            Item::Measure(m) => {
                self.line("measure {".into());
                self.indent += 1;
                for c in &m.clauses {
                    self.line(format!(
                        "{} -> {}",
                        pattern_text(&c.pattern),
                        fmt_rat(&c.value.value)
                    ));
                }
                if let Some(d) = &m.default {
                    self.line(format!("default -> {}", fmt_rat(&d.value)));
                }
                self.indent -= 1;
                self.line("}".into());
            }
            Item::Var(v) => {
                self.line(format!(
                    "var {} : {} init {} {{",
                    v.name.name,
                    sort_text(v.sort.sort),
                    value_text(&v.init.value)
                ));
                self.indent += 1;
                self.clause_items(&v.clauses);
                self.line(format!("otherwise -> {}", expr_text(&v.otherwise, P_IMPLIES)));
                self.indent -= 1;
                self.line("}".into());
            }
            Item::Guard(g) => {
                let mut s = format!("guard {}", pattern_text(&g.pattern));
                if let Some(w) = &g.when {
                    s.push_str(&format!(" when {}", expr_text(w, P_IMPLIES)));
                }
                self.line(s);
            }
            Item::Export(e) => {
                let names: Vec<&str> = e.names.iter().map(|n| n.name.as_str()).collect();
                self.line(format!("export {}", names.join(", ")));
            }
            Item::Component(c) => {
                self.line(format!("component {} {{", c.name.name));
                self.indent += 1;
                self.items_block(&c.items);
                self.indent -= 1;
                self.line("}".into());
            }
            Item::Project(p) => {
                let mut s = format!("project {}", p.name.name);
                if let Some(id) = &p.for_id {
                    s.push_str(&format!(" for {}", value_text(&id.value)));
                }
                s.push_str(&format!(
                    " into {} freeze {} emit {{",
                    p.component.name,
                    expr_text(&p.freeze, P_IMPLIES)
                ));
                self.line(s);
                self.indent += 1;
                self.emit_items(&p.emit);
                self.indent -= 1;
                self.line("}".into());
            }
            Item::Rendezvous(r) => {
                self.line(format!("rendezvous {} {}", r.send.name, r.receive.name));
            }
            Item::Property(p) => {
                self.line(format!(
                    "property {} = {}",
                    p.name.name,
                    expr_text(&p.body, P_IMPLIES)
                ));
            }
            Item::Forall(f) => {
                self.line(format!("forall {} {{", binders_text(&f.binders)));
                self.indent += 1;
                self.items_block(&f.body);
                self.indent -= 1;
                self.line("}".into());
            }
        }
    }

    fn clause_items(&mut self, items: &[ClauseItem]) {
        for item in items {
            match item {
                ClauseItem::One(c) => {
                    let guard = match &c.guard {
                        ClauseGuardAst::On { pattern, when } => {
                            let mut s = format!("on {}", pattern_text(pattern));
                            if let Some(w) = when {
                                s.push_str(&format!(" when {}", expr_text(w, P_IMPLIES)));
                            }
                            s
                        }
                        // Bare guards are always parenthesized so the clause
                        // boundary before them stays unambiguous.
                        ClauseGuardAst::When(e) => format!("({})", expr_text(e, P_IMPLIES)),
                    };
                    self.line(format!("{} -> {}", guard, expr_text(&c.body, P_IMPLIES)));
                }
                ClauseItem::Forall(f) => {
                    self.line(format!("forall {} {{", binders_text(&f.binders)));
                    self.indent += 1;
                    self.clause_items(&f.body);
                    self.indent -= 1;
                    self.line("}".into());
                }
            }
        }
    }

    fn emit_items(&mut self, items: &[EmitItem]) {
        for item in items {
            match item {
                EmitItem::One(c) => {
                    let mut s = pattern_text(&c.pattern);
                    if let Some(w) = &c.when {
                        s.push_str(&format!(" when {}", expr_text(w, P_IMPLIES)));
                    }
                    s.push_str(" -> (");
                    s.push_str(&c.head.name);
                    for arg in &c.args {
                        s.push(' ');
                        s.push_str(&expr_text(arg, P_NEG));
                    }
                    s.push(')');
                    self.line(s);
                }
                EmitItem::Forall(f) => {
                    self.line(format!("forall {} {{", binders_text(&f.binders)));
                    self.indent += 1;
                    self.emit_items(&f.body);
                    self.indent -= 1;
                    self.line("}".into());
                }
            }
        }
    }
}

fn binders_text(binders: &[Binder]) -> String {
    let parts: Vec<String> = binders
        .iter()
        .map(|b| format!("{} in {}", b.var.name, b.domain.name))
        .collect();
    parts.join(", ")
}

fn sort_text(s: Sort) -> &'static str {
    match s {
        Sort::Bool => "bool",
        Sort::Rat => "rat",
        Sort::Symbol => "sym",
        Sort::Component => "component",
    }
}

/// A value in literal position (domains, init, pattern arguments): symbols
/// print bare there.
fn value_text(v: &Value) -> String {
    match v {
        Value::Sym(s) => s.clone(),
        Value::Rat(q) => fmt_rat(q),
        Value::Bool(b) => b.to_string(),
        Value::Comp(_) => "<component>".into(),
    }
}

fn pattern_text(p: &Pattern) -> String {
    pattern_text_parts(&p.head.name, &p.args)
}

fn pattern_text_parts(head: &str, args: &[PatArgAst]) -> String {
    let mut s = format!("({head}");
    for arg in args {
        s.push(' ');
        match arg {
            PatArgAst::Wild(_) => s.push('_'),
            PatArgAst::Name(id) => s.push_str(&id.name),
            // A quoted symbol stays quoted so it round-trips as a literal,
            // not as a bare name.
            PatArgAst::Lit(v) => match &v.value {
                Value::Sym(name) => {
                    s.push('\'');
                    s.push_str(name);
                }
                other => s.push_str(&value_text(other)),
            },
        }
    }
    s.push(')');
    s
}

fn prec(e: &ExprAst) -> u8 {
    match e {
        ExprAst::Implies(..) => P_IMPLIES,
        ExprAst::Or(..) => P_OR,
        ExprAst::And(..) => P_AND,
        ExprAst::Not(..)
        | ExprAst::Next(..)
        | ExprAst::PossibleNext(..)
        | ExprAst::Always(..)
        | ExprAst::Globally(..)
        | ExprAst::Within(..)
        | ExprAst::Eventually(..)
        | ExprAst::Bounded(..)
        | ExprAst::BoundCompare(..) => P_UNARY,
        ExprAst::Cmp(..) => P_CMP,
        ExprAst::Add(..) | ExprAst::Sub(..) => P_ADD,
        ExprAst::Mul(..) => P_MUL,
        ExprAst::Neg(..) => P_NEG,
        ExprAst::Lit(_)
        | ExprAst::Ref(_)
        | ExprAst::PostRef(_)
        | ExprAst::Export { .. }
        | ExprAst::EventMeasure(_) => P_ATOM,
    }
}

fn cmp_text(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Eq => "=",
        CmpOp::Ne => "!=",
        CmpOp::Lt => "<",
        CmpOp::Le => "<=",
        CmpOp::Gt => ">",
        CmpOp::Ge => ">=",
    }
}

pub(crate) fn expr_text(e: &ExprAst, context: u8) -> String {
    let own = prec(e);
    let body = match e {
        ExprAst::Lit(v) => match &v.value {
            Value::Sym(s) => format!("'{s}"),
            other => value_text(other),
        },
        ExprAst::Ref(id) => id.name.clone(),
        ExprAst::PostRef(id) => format!("{}'", id.name),
        ExprAst::Export { var, proj, .. } => format!("{}({})", var.name, proj.name),
        ExprAst::EventMeasure(_) => "m(a)".into(),
        ExprAst::Not(x, _) => format!("not {}", expr_text(x, P_UNARY)),
        ExprAst::Next(x, _) => format!("next {}", expr_text(x, P_UNARY)),
        ExprAst::PossibleNext(x, _) => format!("possible_next {}", expr_text(x, P_UNARY)),
        ExprAst::Always(x, _) => format!("always {}", expr_text(x, P_UNARY)),
        ExprAst::Globally(x, _) => format!("globally {}", expr_text(x, P_UNARY)),
        ExprAst::Within(n, x, _) => format!("within {n} {}", expr_text(x, P_UNARY)),
        ExprAst::Eventually(x, _) => format!("eventually {}", expr_text(x, P_UNARY)),
        ExprAst::Bounded(v, _) => format!("bounded {}", v.name),
        ExprAst::BoundCompare(v, k, _) => {
            format!("bounded {} < {}", v.name, fmt_rat(&k.value))
        }
        ExprAst::And(l, r, _) => {
            format!("{} and {}", expr_text(l, P_AND), expr_text(r, P_AND + 1))
        }
        ExprAst::Or(l, r, _) => {
            format!("{} or {}", expr_text(l, P_OR), expr_text(r, P_OR + 1))
        }
        ExprAst::Implies(l, r, _) => format!(
            "{} implies {}",
            expr_text(l, P_IMPLIES + 1),
            expr_text(r, P_IMPLIES)
        ),
        ExprAst::Cmp(op, l, r, _) => format!(
            "{} {} {}",
            expr_text(l, P_CMP + 1),
            cmp_text(*op),
            expr_text(r, P_CMP + 1)
        ),
        ExprAst::Add(l, r, _) => {
            format!("{} + {}", expr_text(l, P_ADD), expr_text(r, P_ADD + 1))
        }
        ExprAst::Sub(l, r, _) => {
            format!("{} - {}", expr_text(l, P_ADD), expr_text(r, P_ADD + 1))
        }
        ExprAst::Mul(l, r, _) => {
            format!("{} * {}", expr_text(l, P_MUL), expr_text(r, P_MUL + 1))
        }
        ExprAst::Neg(x, _) => format!("-{}", expr_text(x, P_NEG)),
    };
    if own < context {
        format!("({body})")
    } else {
        body
    }
}
