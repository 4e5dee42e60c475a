//! Quantifier expansion. `forall p in proc { ... }` duplicates its body once
//! per domain element, substituting the binder: a bare reference to `p`
//! becomes the element value, and a name segment `_p` (as in `R_p` or `u_p`)
//! is spliced to the element's text (`R_1`, `u_1`). Quoted symbols are
//! literals and never substituted. Expansion happens before static checking;
//! the printed form keeps the quantifier.

use std::collections::HashMap;

use crate::kernel::{fmt_rat, Value};

use super::ast::*;
use super::Diagnostic;

type Domains = HashMap<String, Vec<Value>>;

pub(crate) fn expand(sm: &SourceModel) -> Result<SourceModel, Diagnostic> {
    let domains = collect_domains(&sm.items)?;
    Ok(SourceModel {
        items: expand_items(&sm.items, &domains)?,
    })
}

fn collect_domains(items: &[Item]) -> Result<Domains, Diagnostic> {
    let mut out = Domains::new();
    for item in items {
        if let Item::Domain(d) = item {
            let elems = domain_elems(d)?;
            out.entry(d.name.name.clone()).or_insert(elems);
        }
    }
    Ok(out)
}

pub(crate) fn domain_elems(d: &DomainDecl) -> Result<Vec<Value>, Diagnostic> {
    match &d.def {
        DomainDef::Range(lo, hi) => {
            if lo > hi {
                return Err(Diagnostic::new(
                    d.span,
                    format!("empty range {lo} .. {hi}"),
                ));
            }
            if hi - lo > 10_000 {
                return Err(Diagnostic::new(
                    d.span,
                    format!("range {lo} .. {hi} is too large"),
                ));
            }
            Ok((*lo..=*hi).map(Value::int).collect())
        }
        DomainDef::Elems(vs) => Ok(vs.iter().map(|v| v.value.clone()).collect()),
    }
}

fn expand_items(items: &[Item], domains: &Domains) -> Result<Vec<Item>, Diagnostic> {
    let mut out = Vec::new();
    for item in items {
        match item {
            Item::Forall(f) => {
                for env in bindings(&f.binders, domains)? {
                    let sub = Subst { env: &env };
                    let mut body = Vec::with_capacity(f.body.len());
                    for inner in &f.body {
                        if let Item::Domain(d) = inner {
                            return Err(Diagnostic::new(
                                d.span,
                                "domains cannot be declared under forall",
                            ));
                        }
                        body.push(sub.item(inner)?);
                    }
                    out.extend(expand_items(&body, domains)?);
                }
            }
            Item::Component(c) => {
                let mut merged = domains.clone();
                for (name, elems) in collect_domains(&c.items)? {
                    merged.insert(name, elems);
                }
                out.push(Item::Component(ComponentDecl {
                    name: c.name.clone(),
                    items: expand_items(&c.items, &merged)?,
                    span: c.span,
                }));
            }
            Item::Var(v) => {
                out.push(Item::Var(VarDecl {
                    clauses: expand_clauses(&v.clauses, domains)?,
                    ..v.clone()
                }));
            }
            Item::Project(p) => {
                out.push(Item::Project(ProjectDecl {
                    emit: expand_emits(&p.emit, domains)?,
                    ..p.clone()
                }));
            }
            other => out.push(other.clone()),
        }
    }
    Ok(out)
}

fn expand_clauses(items: &[ClauseItem], domains: &Domains) -> Result<Vec<ClauseItem>, Diagnostic> {
    let mut out = Vec::new();
    for item in items {
        match item {
            ClauseItem::One(_) => out.push(item.clone()),
            ClauseItem::Forall(f) => {
                for env in bindings(&f.binders, domains)? {
                    let sub = Subst { env: &env };
                    let body: Vec<ClauseItem> = f
                        .body
                        .iter()
                        .map(|c| sub.clause_item(c))
                        .collect::<Result<_, _>>()?;
                    out.extend(expand_clauses(&body, domains)?);
                }
            }
        }
    }
    Ok(out)
}

fn expand_emits(items: &[EmitItem], domains: &Domains) -> Result<Vec<EmitItem>, Diagnostic> {
    let mut out = Vec::new();
    for item in items {
        match item {
            EmitItem::One(_) => out.push(item.clone()),
            EmitItem::Forall(f) => {
                for env in bindings(&f.binders, domains)? {
                    let sub = Subst { env: &env };
                    let body: Vec<EmitItem> = f
                        .body
                        .iter()
                        .map(|c| sub.emit_item(c))
                        .collect::<Result<_, _>>()?;
                    out.extend(expand_emits(&body, domains)?);
                }
            }
        }
    }
    Ok(out)
}

/// All assignments of the binder list, leftmost binder varying slowest.
fn bindings(
    binders: &[Binder],
    domains: &Domains,
) -> Result<Vec<Vec<(String, Value)>>, Diagnostic> {
    for (i, b) in binders.iter().enumerate() {
        if binders[..i].iter().any(|o| o.var.name == b.var.name) {
            return Err(Diagnostic::new(
                b.var.span,
                format!("duplicate binder `{}`", b.var.name),
            ));
        }
    }
    let mut combos: Vec<Vec<(String, Value)>> = vec![Vec::new()];
    for b in binders {
        let elems = domains.get(&b.domain.name).ok_or_else(|| {
            Diagnostic::new(
                b.domain.span,
                format!("unknown domain `{}`", b.domain.name),
            )
        })?;
        let mut next = Vec::with_capacity(combos.len() * elems.len());
        for combo in &combos {
            for v in elems {
                let mut c = combo.clone();
                c.push((b.var.name.clone(), v.clone()));
                next.push(c);
            }
        }
        combos = next;
    }
    Ok(combos)
}

/// One substitution environment applied through a subtree.
struct Subst<'a> {
    env: &'a [(String, Value)],
}

impl Subst<'_> {
    fn lookup(&self, name: &str) -> Option<&Value> {
        self.env.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    fn check_shadow(&self, binders: &[Binder]) -> Result<(), Diagnostic> {
        for b in binders {
            if self.lookup(&b.var.name).is_some() {
                return Err(Diagnostic::new(
                    b.var.span,
                    format!("binder `{}` shadows an enclosing binder", b.var.name),
                ));
            }
        }
        Ok(())
    }

    /// Replace name segments equal to a binder: `R_p` becomes `R_1`, and a
    /// name that is exactly a binder becomes the value's text.
    fn ident(&self, id: &Ident) -> Ident {
        if self.env.is_empty() {
            return id.clone();
        }
        let spliced: Vec<String> = id
            .name
            .split('_')
            .map(|seg| match self.lookup(seg) {
                Some(v) => value_word(v),
                None => seg.to_string(),
            })
            .collect();
        Ident::new(spliced.join("_"), id.span)
    }

    fn value_lit(&self, v: &ValueLit) -> ValueLit {
        if let Value::Sym(s) = &v.value {
            if let Some(bound) = self.lookup(s) {
                return ValueLit {
                    value: bound.clone(),
                    span: v.span,
                };
            }
        }
        v.clone()
    }

    fn pattern(&self, p: &Pattern) -> Pattern {
        Pattern {
            head: self.ident(&p.head),
            args: p.args.iter().map(|a| self.pat_arg(a)).collect(),
            span: p.span,
        }
    }

    fn pat_arg(&self, a: &PatArgAst) -> PatArgAst {
        match a {
            PatArgAst::Name(id) => match self.lookup(&id.name) {
                Some(v) => PatArgAst::Lit(ValueLit {
                    value: v.clone(),
                    span: id.span,
                }),
                None => PatArgAst::Name(self.ident(id)),
            },
            other => other.clone(),
        }
    }

    fn expr(&self, e: &ExprAst) -> Result<ExprAst, Diagnostic> {
        Ok(match e {
            ExprAst::Lit(v) => ExprAst::Lit(v.clone()),
            ExprAst::Ref(id) => match self.lookup(&id.name) {
                Some(v) => ExprAst::Lit(ValueLit {
                    value: v.clone(),
                    span: id.span,
                }),
                None => ExprAst::Ref(self.ident(id)),
            },
            ExprAst::PostRef(id) => {
                if self.lookup(&id.name).is_some() {
                    return Err(Diagnostic::new(
                        id.span,
                        format!("binder `{}` has no post-event value", id.name),
                    ));
                }
                ExprAst::PostRef(self.ident(id))
            }
            ExprAst::Export { var, proj, span } => ExprAst::Export {
                var: self.ident(var),
                proj: self.ident(proj),
                span: *span,
            },
            ExprAst::EventMeasure(s) => ExprAst::EventMeasure(*s),
            ExprAst::Not(x, s) => ExprAst::Not(Box::new(self.expr(x)?), *s),
            ExprAst::And(l, r, s) => {
                ExprAst::And(Box::new(self.expr(l)?), Box::new(self.expr(r)?), *s)
            }
            ExprAst::Or(l, r, s) => {
                ExprAst::Or(Box::new(self.expr(l)?), Box::new(self.expr(r)?), *s)
            }
            ExprAst::Implies(l, r, s) => {
                ExprAst::Implies(Box::new(self.expr(l)?), Box::new(self.expr(r)?), *s)
            }
            ExprAst::Cmp(op, l, r, s) => {
                ExprAst::Cmp(*op, Box::new(self.expr(l)?), Box::new(self.expr(r)?), *s)
            }
            ExprAst::Add(l, r, s) => {
                ExprAst::Add(Box::new(self.expr(l)?), Box::new(self.expr(r)?), *s)
            }
            ExprAst::Sub(l, r, s) => {
                ExprAst::Sub(Box::new(self.expr(l)?), Box::new(self.expr(r)?), *s)
            }
            ExprAst::Mul(l, r, s) => {
                ExprAst::Mul(Box::new(self.expr(l)?), Box::new(self.expr(r)?), *s)
            }
            ExprAst::Neg(x, s) => ExprAst::Neg(Box::new(self.expr(x)?), *s),
            ExprAst::Next(x, s) => ExprAst::Next(Box::new(self.expr(x)?), *s),
            ExprAst::PossibleNext(x, s) => ExprAst::PossibleNext(Box::new(self.expr(x)?), *s),
            ExprAst::Always(x, s) => ExprAst::Always(Box::new(self.expr(x)?), *s),
            ExprAst::Globally(x, s) => ExprAst::Globally(Box::new(self.expr(x)?), *s),
            ExprAst::Within(n, x, s) => ExprAst::Within(*n, Box::new(self.expr(x)?), *s),
            ExprAst::Eventually(x, s) => ExprAst::Eventually(Box::new(self.expr(x)?), *s),
            ExprAst::Bounded(id, s) => ExprAst::Bounded(self.ident(id), *s),
            ExprAst::BoundCompare(id, q, s) => ExprAst::BoundCompare(self.ident(id), q.clone(), *s),
        })
    }

    fn expr_opt(&self, e: &Option<ExprAst>) -> Result<Option<ExprAst>, Diagnostic> {
        e.as_ref().map(|e| self.expr(e)).transpose()
    }

    fn clause_item(&self, c: &ClauseItem) -> Result<ClauseItem, Diagnostic> {
        Ok(match c {
            ClauseItem::One(u) => ClauseItem::One(UpdateClauseAst {
                guard: match &u.guard {
                    ClauseGuardAst::On { pattern, when } => ClauseGuardAst::On {
                        pattern: self.pattern(pattern),
                        when: self.expr_opt(when)?,
                    },
                    ClauseGuardAst::When(e) => ClauseGuardAst::When(self.expr(e)?),
                },
                body: self.expr(&u.body)?,
                span: u.span,
            }),
            ClauseItem::Forall(f) => {
                self.check_shadow(&f.binders)?;
                ClauseItem::Forall(ForallClauses {
                    binders: f.binders.clone(),
                    body: f
                        .body
                        .iter()
                        .map(|c| self.clause_item(c))
                        .collect::<Result<_, _>>()?,
                    span: f.span,
                })
            }
        })
    }

    fn emit_item(&self, c: &EmitItem) -> Result<EmitItem, Diagnostic> {
        Ok(match c {
            EmitItem::One(u) => EmitItem::One(EmitClauseAst {
                pattern: self.pattern(&u.pattern),
                when: self.expr_opt(&u.when)?,
                head: self.ident(&u.head),
                args: u
                    .args
                    .iter()
                    .map(|a| self.expr(a))
                    .collect::<Result<_, _>>()?,
                span: u.span,
            }),
            EmitItem::Forall(f) => {
                self.check_shadow(&f.binders)?;
                EmitItem::Forall(ForallEmits {
                    binders: f.binders.clone(),
                    body: f
                        .body
                        .iter()
                        .map(|c| self.emit_item(c))
                        .collect::<Result<_, _>>()?,
                    span: f.span,
                })
            }
        })
    }

    fn item(&self, item: &Item) -> Result<Item, Diagnostic> {
        Ok(match item {
            Item::Domain(d) => Item::Domain(d.clone()),
            Item::Alphabet(a) => Item::Alphabet(AlphabetDecl {
                entries: a
                    .entries
                    .iter()
                    .map(|e| {
                        self.check_shadow(&e.binders)?;
                        Ok(AlphabetEntry {
                            head: self.ident(&e.head),
                            args: e.args.iter().map(|x| self.pat_arg(x)).collect(),
                            binders: e.binders.clone(),
                            span: e.span,
                        })
                    })
                    .collect::<Result<_, Diagnostic>>()?,
                span: a.span,
            }),
            Item::Measure(m) => Item::Measure(MeasureDecl {
                clauses: m
                    .clauses
                    .iter()
                    .map(|c| MeasureClause {
                        pattern: self.pattern(&c.pattern),
                        value: c.value.clone(),
                        span: c.span,
                    })
                    .collect(),
                default: m.default.clone(),
                span: m.span,
            }),
            Item::Var(v) => Item::Var(VarDecl {
                name: self.ident(&v.name),
                sort: v.sort.clone(),
                init: self.value_lit(&v.init),
                clauses: v
                    .clauses
                    .iter()
                    .map(|c| self.clause_item(c))
                    .collect::<Result<_, _>>()?,
                otherwise: self.expr(&v.otherwise)?,
                span: v.span,
            }),
            Item::Guard(g) => Item::Guard(GuardDecl {
                pattern: self.pattern(&g.pattern),
                when: self.expr_opt(&g.when)?,
                span: g.span,
            }),
            Item::Export(e) => Item::Export(ExportDecl {
                names: e.names.iter().map(|n| self.ident(n)).collect(),
                span: e.span,
            }),
            Item::Component(c) => Item::Component(ComponentDecl {
                name: self.ident(&c.name),
                items: c
                    .items
                    .iter()
                    .map(|i| self.item(i))
                    .collect::<Result<_, _>>()?,
                span: c.span,
            }),
            Item::Project(p) => Item::Project(ProjectDecl {
                name: self.ident(&p.name),
                for_id: p.for_id.as_ref().map(|v| self.value_lit(v)),
                component: self.ident(&p.component),
                freeze: self.expr(&p.freeze)?,
                emit: p
                    .emit
                    .iter()
                    .map(|c| self.emit_item(c))
                    .collect::<Result<_, _>>()?,
                span: p.span,
            }),
            Item::Rendezvous(r) => Item::Rendezvous(RendezvousDecl {
                send: self.ident(&r.send),
                receive: self.ident(&r.receive),
                span: r.span,
            }),
            Item::Property(p) => Item::Property(PropertyDecl {
                name: self.ident(&p.name),
                body: self.expr(&p.body)?,
                span: p.span,
            }),
            Item::Forall(f) => {
                self.check_shadow(&f.binders)?;
                Item::Forall(ForallDecl {
                    binders: f.binders.clone(),
                    body: f
                        .body
                        .iter()
                        .map(|i| self.item(i))
                        .collect::<Result<_, _>>()?,
                    span: f.span,
                })
            }
        })
    }
}

/// The text a binder value contributes when spliced into a name.
fn value_word(v: &Value) -> String {
    match v {
        Value::Sym(s) => s.clone(),
        Value::Rat(q) => fmt_rat(q),
        Value::Bool(b) => b.to_string(),
        Value::Comp(_) => String::from("component"),
    }
}
