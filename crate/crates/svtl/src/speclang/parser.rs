//! Recursive-descent parser. The grammar is self-delimiting (no statement
//! terminator; `;` is the comment character), so each form ends where the
//! next keyword or closing bracket begins. Expression nesting is depth
//! limited so arbitrary byte inputs cannot overflow the stack.

use crate::kernel::{rat, rat_int, CmpOp, Sort, Value};

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, LoadError};

const KEYWORDS: &[&str] = &[
    "alphabet",
    "always",
    "and",
    "bool",
    "bounded",
    "component",
    "default",
    "domain",
    "emit",
    "eventually",
    "export",
    "false",
    "for",
    "forall",
    "freeze",
    "globally",
    "guard",
    "implies",
    "in",
    "init",
    "into",
    "measure",
    "next",
    "not",
    "on",
    "or",
    "otherwise",
    "possible_next",
    "project",
    "property",
    "rat",
    "rendezvous",
    "sym",
    "true",
    "var",
    "when",
    "within",
];

pub(crate) fn is_keyword(name: &str) -> bool {
    KEYWORDS.binary_search(&name).is_ok()
}

/// Maximum expression nesting depth; inputs beyond it are rejected with a
/// diagnostic instead of a stack overflow.
const MAX_DEPTH: u32 = 200;

pub fn parse(src: &str) -> Result<SourceModel, LoadError> {
    let tokens = lex(src).map_err(|d| LoadError::Diagnostics(vec![d]))?;
    let mut p = Parser {
        end: tokens
            .last()
            .map(|t| Span::new(t.span.line, t.span.col + 1))
            .unwrap_or(Span::new(1, 1)),
        tokens,
        pos: 0,
        depth: 0,
    };
    let mut items = Vec::new();
    while p.pos < p.tokens.len() {
        items.push(p.item().map_err(|d| LoadError::Diagnostics(vec![d]))?);
    }
    Ok(SourceModel { items })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: u32,
    end: Span,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_span(&self) -> Span {
        self.tokens.get(self.pos).map(|t| t.span).unwrap_or(self.end)
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, span: Span, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(span, msg)
    }

    fn unexpected(&self, what: &str) -> Diagnostic {
        match self.tokens.get(self.pos) {
            Some(t) => self.err(t.span, format!("expected {what}, found {}", t.tok)),
            None => self.err(self.end, format!("expected {what}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, Diagnostic> {
        match self.peek() {
            Some(t) if *t == tok => Ok(self.bump().unwrap().span),
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<Span, Diagnostic> {
        if self.at_kw(kw) {
            Ok(self.bump().unwrap().span)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    /// A name; keywords are rejected.
    fn ident(&mut self, what: &str) -> Result<Ident, Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let t = self.bump().unwrap();
                let Tok::Ident(s) = t.tok else { unreachable!() };
                Ok(Ident::new(s, t.span))
            }
            Some(Tok::Ident(s)) => {
                let msg = format!("`{s}` is a keyword and cannot be used as {what}");
                Err(self.err(self.peek_span(), msg))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn int(&mut self, what: &str) -> Result<(i64, Span), Diagnostic> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let t = self.bump().unwrap();
                let Tok::Int(n) = t.tok else { unreachable!() };
                Ok((n, t.span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// `n` or `n/d`, with optional leading minus.
    fn rat_lit(&mut self) -> Result<RatLit, Diagnostic> {
        let span = self.peek_span();
        let neg = if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            true
        } else {
            false
        };
        let (n, _) = self.int("a number")?;
        let value = if matches!(self.peek(), Some(Tok::Slash)) {
            self.bump();
            let (d, dspan) = self.int("a denominator")?;
            if d == 0 {
                return Err(self.err(dspan, "zero denominator"));
            }
            rat(n, d)
        } else {
            rat_int(n)
        };
        Ok(RatLit {
            value: if neg { -value } else { value },
            span,
        })
    }

    /// A literal value: number, rational, boolean, or bare symbol.
    fn value_lit(&mut self) -> Result<ValueLit, Diagnostic> {
        let span = self.peek_span();
        match self.peek() {
            Some(Tok::Int(_)) | Some(Tok::Minus) => {
                let r = self.rat_lit()?;
                Ok(ValueLit {
                    value: Value::Rat(r.value),
                    span,
                })
            }
            Some(Tok::Ident(s)) if s == "true" => {
                self.bump();
                Ok(ValueLit {
                    value: Value::Bool(true),
                    span,
                })
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.bump();
                Ok(ValueLit {
                    value: Value::Bool(false),
                    span,
                })
            }
            Some(Tok::Ident(_)) => {
                let id = self.ident("a value")?;
                Ok(ValueLit {
                    value: Value::Sym(id.name),
                    span,
                })
            }
            Some(Tok::Quote(_)) => {
                let t = self.bump().unwrap();
                let Tok::Quote(s) = t.tok else { unreachable!() };
                Ok(ValueLit {
                    value: Value::Sym(s),
                    span,
                })
            }
            _ => Err(self.unexpected("a value")),
        }
    }

    fn item(&mut self) -> Result<Item, Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) => match s.as_str() {
                "domain" => self.domain_decl().map(Item::Domain),
                "alphabet" => self.alphabet_decl().map(Item::Alphabet),
                "measure" => self.measure_decl().map(Item::Measure),
                "var" => self.var_decl().map(Item::Var),
                "guard" => self.guard_decl().map(Item::Guard),
                "export" => self.export_decl().map(Item::Export),
                "component" => self.component_decl().map(Item::Component),
                "project" => self.project_decl().map(Item::Project),
                "rendezvous" => self.rendezvous_decl().map(Item::Rendezvous),
                "property" => self.property_decl().map(Item::Property),
                "forall" => self.forall_decl().map(Item::Forall),
                _ => Err(self.unexpected("a declaration")),
            },
            _ => Err(self.unexpected("a declaration")),
        }
    }

    fn domain_decl(&mut self) -> Result<DomainDecl, Diagnostic> {
        let span = self.expect_kw("domain")?;
        let name = self.ident("a domain name")?;
        self.expect(Tok::Assign, "`=`")?;
        let def = match self.peek() {
            Some(Tok::LBrace) => {
                self.bump();
                let mut elems = Vec::new();
                if !matches!(self.peek(), Some(Tok::RBrace)) {
                    elems.push(self.value_lit()?);
                    while matches!(self.peek(), Some(Tok::Comma)) {
                        self.bump();
                        elems.push(self.value_lit()?);
                    }
                }
                self.expect(Tok::RBrace, "`}`")?;
                DomainDef::Elems(elems)
            }
            _ => {
                let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                    self.bump();
                    true
                } else {
                    false
                };
                let (lo, _) = self.int("a number or `{`")?;
                let lo = if neg { -lo } else { lo };
                self.expect(Tok::DotDot, "`..`")?;
                let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                    self.bump();
                    true
                } else {
                    false
                };
                let (hi, _) = self.int("a number")?;
                let hi = if neg { -hi } else { hi };
                DomainDef::Range(lo, hi)
            }
        };
        Ok(DomainDecl { name, def, span })
    }

    fn binders(&mut self) -> Result<Vec<Binder>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            let var = self.ident("a binder name")?;
            self.expect_kw("in")?;
            let domain = self.ident("a domain name")?;
            out.push(Binder { var, domain });
            if matches!(self.peek(), Some(Tok::Comma)) {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn alphabet_decl(&mut self) -> Result<AlphabetDecl, Diagnostic> {
        let span = self.expect_kw("alphabet")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut entries = Vec::new();
        while !matches!(self.peek(), Some(Tok::RBrace)) {
            let pat = self.pattern()?;
            let binders = if self.at_kw("for") {
                self.bump();
                self.binders()?
            } else {
                Vec::new()
            };
            entries.push(AlphabetEntry {
                head: pat.head,
                args: pat.args,
                binders,
                span: pat.span,
            });
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(AlphabetDecl { entries, span })
    }

    fn pattern(&mut self) -> Result<Pattern, Diagnostic> {
        let span = self.expect(Tok::LParen, "`(`")?;
        let head = self.ident("an event head")?;
        let mut args = Vec::new();
        while !matches!(self.peek(), Some(Tok::RParen)) {
            let aspan = self.peek_span();
            match self.peek() {
                Some(Tok::Wild) => {
                    self.bump();
                    args.push(PatArgAst::Wild(aspan));
                }
                Some(Tok::Ident(s)) if s != "true" && s != "false" => {
                    let id = self.ident("a pattern argument")?;
                    args.push(PatArgAst::Name(id));
                }
                _ => args.push(PatArgAst::Lit(self.value_lit()?)),
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(Pattern { head, args, span })
    }

    fn measure_decl(&mut self) -> Result<MeasureDecl, Diagnostic> {
        let span = self.expect_kw("measure")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut clauses = Vec::new();
        let mut default = None;
        while !matches!(self.peek(), Some(Tok::RBrace)) {
            if self.at_kw("default") {
                let dspan = self.bump().unwrap().span;
                self.expect(Tok::Arrow, "`->`")?;
                if default.is_some() {
                    return Err(self.err(dspan, "duplicate `default` measure"));
                }
                default = Some(self.rat_lit()?);
            } else {
                let cspan = self.peek_span();
                let pattern = self.pattern()?;
                self.expect(Tok::Arrow, "`->`")?;
                let value = self.rat_lit()?;
                clauses.push(MeasureClause {
                    pattern,
                    value,
                    span: cspan,
                });
            }
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(MeasureDecl {
            clauses,
            default,
            span,
        })
    }

    fn sort(&mut self) -> Result<SortAst, Diagnostic> {
        let span = self.peek_span();
        let sort = if self.at_kw("bool") {
            Sort::Bool
        } else if self.at_kw("rat") {
            Sort::Rat
        } else if self.at_kw("sym") {
            Sort::Symbol
        } else {
            return Err(self.unexpected("a sort (`bool`, `rat`, or `sym`)"));
        };
        self.bump();
        Ok(SortAst { sort, span })
    }

    fn var_decl(&mut self) -> Result<VarDecl, Diagnostic> {
        let span = self.expect_kw("var")?;
        let name = self.ident("a variable name")?;
        self.expect(Tok::Colon, "`:`")?;
        let sort = self.sort()?;
        self.expect_kw("init")?;
        let init = self.value_lit()?;
        self.expect(Tok::LBrace, "`{`")?;
        let clauses = self.clause_items()?;
        self.expect_kw("otherwise")?;
        self.expect(Tok::Arrow, "`->`")?;
        let otherwise = self.expr()?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok(VarDecl {
            name,
            sort,
            init,
            clauses,
            otherwise,
            span,
        })
    }

    fn clause_items(&mut self) -> Result<Vec<ClauseItem>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            if self.at_kw("otherwise") || matches!(self.peek(), Some(Tok::RBrace) | None) {
                return Ok(out);
            }
            if self.at_kw("forall") {
                let fspan = self.bump().unwrap().span;
                let binders = self.binders()?;
                self.expect(Tok::LBrace, "`{`")?;
                let body = self.clause_items()?;
                self.expect(Tok::RBrace, "`}`")?;
                out.push(ClauseItem::Forall(ForallClauses {
                    binders,
                    body,
                    span: fspan,
                }));
                continue;
            }
            let cspan = self.peek_span();
            let guard = if self.at_kw("on") {
                self.bump();
                let pattern = self.pattern()?;
                let when = if self.at_kw("when") {
                    self.bump();
                    Some(self.expr()?)
                } else {
                    None
                };
                ClauseGuardAst::On { pattern, when }
            } else {
                ClauseGuardAst::When(self.expr()?)
            };
            self.expect(Tok::Arrow, "`->`")?;
            let body = self.expr()?;
            out.push(ClauseItem::One(UpdateClauseAst {
                guard,
                body,
                span: cspan,
            }));
        }
    }

    fn guard_decl(&mut self) -> Result<GuardDecl, Diagnostic> {
        let span = self.expect_kw("guard")?;
        let pattern = self.pattern()?;
        let when = if self.at_kw("when") {
            self.bump();
            Some(self.expr()?)
        } else {
            None
        };
        Ok(GuardDecl {
            pattern,
            when,
            span,
        })
    }

    fn export_decl(&mut self) -> Result<ExportDecl, Diagnostic> {
        let span = self.expect_kw("export")?;
        let mut names = vec![self.ident("a variable name")?];
        while matches!(self.peek(), Some(Tok::Comma)) {
            self.bump();
            names.push(self.ident("a variable name")?);
        }
        Ok(ExportDecl { names, span })
    }

    fn component_decl(&mut self) -> Result<ComponentDecl, Diagnostic> {
        let span = self.expect_kw("component")?;
        let name = self.ident("a component name")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut items = Vec::new();
        while !matches!(self.peek(), Some(Tok::RBrace)) {
            if self.peek().is_none() {
                return Err(self.unexpected("`}`"));
            }
            items.push(self.item()?);
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(ComponentDecl { name, items, span })
    }

    fn project_decl(&mut self) -> Result<ProjectDecl, Diagnostic> {
        let span = self.expect_kw("project")?;
        let name = self.ident("a projection name")?;
        let for_id = if self.at_kw("for") {
            self.bump();
            Some(self.value_lit()?)
        } else {
            None
        };
        self.expect_kw("into")?;
        let component = self.ident("a component name")?;
        self.expect_kw("freeze")?;
        let freeze = self.expr()?;
        self.expect_kw("emit")?;
        self.expect(Tok::LBrace, "`{`")?;
        let emit = self.emit_items()?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok(ProjectDecl {
            name,
            for_id,
            component,
            freeze,
            emit,
            span,
        })
    }

    fn emit_items(&mut self) -> Result<Vec<EmitItem>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            if matches!(self.peek(), Some(Tok::RBrace) | None) {
                return Ok(out);
            }
            if self.at_kw("forall") {
                let fspan = self.bump().unwrap().span;
                let binders = self.binders()?;
                self.expect(Tok::LBrace, "`{`")?;
                let body = self.emit_items()?;
                self.expect(Tok::RBrace, "`}`")?;
                out.push(EmitItem::Forall(ForallEmits {
                    binders,
                    body,
                    span: fspan,
                }));
                continue;
            }
            let cspan = self.peek_span();
            let pattern = self.pattern()?;
            let when = if self.at_kw("when") {
                self.bump();
                Some(self.expr()?)
            } else {
                None
            };
            self.expect(Tok::Arrow, "`->`")?;
            self.expect(Tok::LParen, "`(`")?;
            let head = self.ident("a component event head")?;
            let mut args = Vec::new();
            while !matches!(self.peek(), Some(Tok::RParen)) {
                args.push(self.factor()?);
            }
            self.expect(Tok::RParen, "`)`")?;
            out.push(EmitItem::One(EmitClauseAst {
                pattern,
                when,
                head,
                args,
                span: cspan,
            }));
        }
    }

    fn rendezvous_decl(&mut self) -> Result<RendezvousDecl, Diagnostic> {
        let span = self.expect_kw("rendezvous")?;
        let send = self.ident("the send head")?;
        let receive = self.ident("the receive head")?;
        Ok(RendezvousDecl {
            send,
            receive,
            span,
        })
    }

    fn property_decl(&mut self) -> Result<PropertyDecl, Diagnostic> {
        let span = self.expect_kw("property")?;
        let name = self.ident("a property name")?;
        self.expect(Tok::Assign, "`=`")?;
        let body = self.expr()?;
        Ok(PropertyDecl { name, body, span })
    }

    fn forall_decl(&mut self) -> Result<ForallDecl, Diagnostic> {
        let span = self.expect_kw("forall")?;
        let binders = self.binders()?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut body = Vec::new();
        while !matches!(self.peek(), Some(Tok::RBrace)) {
            if self.peek().is_none() {
                return Err(self.unexpected("`}`"));
            }
            body.push(self.item()?);
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(ForallDecl {
            binders,
            body,
            span,
        })
    }

    fn enter(&mut self) -> Result<(), Diagnostic> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(self.err(self.peek_span(), "expression is nested too deeply"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<ExprAst, Diagnostic> {
        self.enter()?;
        let r = self.implies();
        self.depth -= 1;
        r
    }

    fn implies(&mut self) -> Result<ExprAst, Diagnostic> {
        let left = self.or()?;
        if self.at_kw("implies") {
            let span = self.bump().unwrap().span;
            let right = self.expr()?;
            Ok(ExprAst::Implies(Box::new(left), Box::new(right), span))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<ExprAst, Diagnostic> {
        let mut left = self.and()?;
        while self.at_kw("or") {
            let span = self.bump().unwrap().span;
            let right = self.and()?;
            left = ExprAst::Or(Box::new(left), Box::new(right), span);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<ExprAst, Diagnostic> {
        let mut left = self.unary()?;
        while self.at_kw("and") {
            let span = self.bump().unwrap().span;
            let right = self.unary()?;
            left = ExprAst::And(Box::new(left), Box::new(right), span);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<ExprAst, Diagnostic> {
        self.enter()?;
        let r = self.unary_inner();
        self.depth -= 1;
        r
    }

    fn unary_inner(&mut self) -> Result<ExprAst, Diagnostic> {
        macro_rules! prefix {
            ($ctor:path) => {{
                let span = self.bump().unwrap().span;
                let body = self.unary()?;
                return Ok($ctor(Box::new(body), span));
            }};
        }
        if let Some(Tok::Ident(s)) = self.peek() {
            match s.as_str() {
                "not" => prefix!(ExprAst::Not),
                "next" => prefix!(ExprAst::Next),
                "possible_next" => prefix!(ExprAst::PossibleNext),
                "always" => prefix!(ExprAst::Always),
                "globally" => prefix!(ExprAst::Globally),
                "eventually" => prefix!(ExprAst::Eventually),
                "within" => {
                    let span = self.bump().unwrap().span;
                    let (n, nspan) = self.int("a step count")?;
                    let n = u32::try_from(n)
                        .map_err(|_| self.err(nspan, "step count out of range"))?;
                    let body = self.unary()?;
                    return Ok(ExprAst::Within(n, Box::new(body), span));
                }
                "bounded" => {
                    let span = self.bump().unwrap().span;
                    let var = self.ident("a variable name")?;
                    if matches!(self.peek(), Some(Tok::Lt)) {
                        self.bump();
                        let k = self.rat_lit()?;
                        return Ok(ExprAst::BoundCompare(var, k, span));
                    }
                    return Ok(ExprAst::Bounded(var, span));
                }
                _ => {}
            }
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<ExprAst, Diagnostic> {
        let left = self.addsub()?;
        let op = match self.peek() {
            Some(Tok::Assign) => CmpOp::Eq,
            Some(Tok::Ne) => CmpOp::Ne,
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Le) => CmpOp::Le,
            Some(Tok::Gt) => CmpOp::Gt,
            Some(Tok::Ge) => CmpOp::Ge,
            _ => return Ok(left),
        };
        let span = self.bump().unwrap().span;
        let right = self.addsub()?;
        Ok(ExprAst::Cmp(op, Box::new(left), Box::new(right), span))
    }

    fn addsub(&mut self) -> Result<ExprAst, Diagnostic> {
        let mut left = self.mul()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    let span = self.bump().unwrap().span;
                    let right = self.mul()?;
                    left = ExprAst::Add(Box::new(left), Box::new(right), span);
                }
                Some(Tok::Minus) => {
                    let span = self.bump().unwrap().span;
                    let right = self.mul()?;
                    left = ExprAst::Sub(Box::new(left), Box::new(right), span);
                }
                _ => return Ok(left),
            }
        }
    }

    fn mul(&mut self) -> Result<ExprAst, Diagnostic> {
        let mut left = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            let span = self.bump().unwrap().span;
            let right = self.factor()?;
            left = ExprAst::Mul(Box::new(left), Box::new(right), span);
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<ExprAst, Diagnostic> {
        self.enter()?;
        let r = self.factor_inner();
        self.depth -= 1;
        r
    }

    fn factor_inner(&mut self) -> Result<ExprAst, Diagnostic> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            let span = self.bump().unwrap().span;
            // Fold a negated numeric literal into the literal itself, so
            // `-1` is a value and not a negation node.
            if matches!(self.peek(), Some(Tok::Int(_))) {
                let save = self.pos;
                self.pos -= 1;
                let r = self.rat_lit()?;
                debug_assert!(self.pos > save);
                return Ok(ExprAst::Lit(ValueLit {
                    value: Value::Rat(r.value),
                    span: r.span,
                }));
            }
            let body = self.factor()?;
            return Ok(ExprAst::Neg(Box::new(body), span));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<ExprAst, Diagnostic> {
        let span = self.peek_span();
        match self.peek() {
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                if matches!(self.peek(), Some(Tok::Prime)) {
                    return Err(self.err(
                        self.peek_span(),
                        "post-event component exports are not supported",
                    ));
                }
                Ok(e)
            }
            Some(Tok::Int(_)) => {
                let r = self.rat_lit()?;
                Ok(ExprAst::Lit(ValueLit {
                    value: Value::Rat(r.value),
                    span,
                }))
            }
            Some(Tok::Quote(_)) => {
                let t = self.bump().unwrap();
                let Tok::Quote(s) = t.tok else { unreachable!() };
                Ok(ExprAst::Lit(ValueLit {
                    value: Value::Sym(s),
                    span,
                }))
            }
            Some(Tok::Ident(s)) if s == "true" || s == "false" => {
                let b = s == "true";
                self.bump();
                Ok(ExprAst::Lit(ValueLit {
                    value: Value::Bool(b),
                    span,
                }))
            }
            Some(Tok::Ident(s)) if s == "m" => {
                self.bump();
                self.expect(Tok::LParen, "`(` (the measure is written `m(a)`)")?;
                match self.peek() {
                    Some(Tok::Ident(a)) if a == "a" => {
                        self.bump();
                    }
                    _ => return Err(self.unexpected("`a` (the measure is written `m(a)`)")),
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(ExprAst::EventMeasure(span))
            }
            Some(Tok::Ident(s)) if s == "a" => Err(self.err(
                span,
                "`a` names the event being applied and only appears as `m(a)`",
            )),
            Some(Tok::Ident(_)) => {
                let id = self.ident("a name")?;
                // `x(...)` is an export read only when the paren is glued to
                // the name; a detached paren starts something new, such as
                // the guard of the next update clause.
                let glued = self.peek_span().line == id.span.line
                    && self.peek_span().col == id.span.col + id.name.chars().count() as u32;
                match self.peek() {
                    Some(Tok::Prime) => {
                        self.bump();
                        Ok(ExprAst::PostRef(id))
                    }
                    Some(Tok::LParen) if glued => {
                        self.bump();
                        let proj = self.ident("a projection name")?;
                        self.expect(Tok::RParen, "`)`")?;
                        let espan = Span::new(id.span.line, id.span.col);
                        if matches!(self.peek(), Some(Tok::Prime)) {
                            return Err(self.err(
                                self.peek_span(),
                                "post-event component exports are not supported",
                            ));
                        }
                        Ok(ExprAst::Export {
                            var: id,
                            proj,
                            span: espan,
                        })
                    }
                    _ => Ok(ExprAst::Ref(id)),
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}
