//! Syntax tree for the modeling language.
//!
//! Every node carries a source span. Spans compare equal unconditionally, so
//! derived equality over the tree is purely structural: two parses of the
//! same text are equal even though positions differ, which is exactly what
//! the print/parse round-trip law needs. Comments never reach the tree.

use crate::kernel::{CmpOp, Rational, Sort, Value};

/// A source position (1-based line and column). Ignored by equality.
#[derive(Debug, Clone, Copy)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

/// A name with its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: Span) -> Self {
        Ident {
            name: name.into(),
            span,
        }
    }
}

/// A literal value with its position.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueLit {
    pub value: Value,
    pub span: Span,
}

/// A rational literal with its position.
#[derive(Debug, Clone, PartialEq)]
pub struct RatLit {
    pub value: Rational,
    pub span: Span,
}

/// A declared sort with its position.
#[derive(Debug, Clone, PartialEq)]
pub struct SortAst {
    pub sort: Sort,
    pub span: Span,
}

/// One `x in domain` binder.
#[derive(Debug, Clone, PartialEq)]
pub struct Binder {
    pub var: Ident,
    pub domain: Ident,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceModel {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Domain(DomainDecl),
    Alphabet(AlphabetDecl),
    Measure(MeasureDecl),
    Var(VarDecl),
    Guard(GuardDecl),
    Export(ExportDecl),
    Component(ComponentDecl),
    Project(ProjectDecl),
    Rendezvous(RendezvousDecl),
    Property(PropertyDecl),
    Forall(ForallDecl),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainDecl {
    pub name: Ident,
    pub def: DomainDef,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainDef {
    /// `lo .. hi`, inclusive on both ends.
    Range(i64, i64),
    Elems(Vec<ValueLit>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphabetDecl {
    pub entries: Vec<AlphabetEntry>,
    pub span: Span,
}

/// One alphabet line: an event shape, optionally quantified over domains.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphabetEntry {
    pub head: Ident,
    pub args: Vec<PatArgAst>,
    pub binders: Vec<Binder>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureDecl {
    pub clauses: Vec<MeasureClause>,
    pub default: Option<RatLit>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureClause {
    pub pattern: Pattern,
    pub value: RatLit,
    pub span: Span,
}

/// An event pattern `(head arg ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub head: Ident,
    pub args: Vec<PatArgAst>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatArgAst {
    Wild(Span),
    Lit(ValueLit),
    /// A bare name: a quantifier binder where one is in scope, otherwise a
    /// symbol.
    Name(Ident),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDecl {
    pub name: Ident,
    pub sort: SortAst,
    pub init: ValueLit,
    pub clauses: Vec<ClauseItem>,
    pub otherwise: ExprAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClauseItem {
    One(UpdateClauseAst),
    Forall(ForallClauses),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForallClauses {
    pub binders: Vec<Binder>,
    pub body: Vec<ClauseItem>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpdateClauseAst {
    pub guard: ClauseGuardAst,
    pub body: ExprAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClauseGuardAst {
    /// `on (pattern) when cond`
    On {
        pattern: Pattern,
        when: Option<ExprAst>,
    },
    /// A bare boolean guard.
    When(ExprAst),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuardDecl {
    pub pattern: Pattern,
    pub when: Option<ExprAst>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportDecl {
    pub names: Vec<Ident>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentDecl {
    pub name: Ident,
    pub items: Vec<Item>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectDecl {
    pub name: Ident,
    /// Identity used for rendezvous pairing; defaults to the name as symbol.
    pub for_id: Option<ValueLit>,
    pub component: Ident,
    pub freeze: ExprAst,
    pub emit: Vec<EmitItem>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EmitItem {
    One(EmitClauseAst),
    Forall(ForallEmits),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForallEmits {
    pub binders: Vec<Binder>,
    pub body: Vec<EmitItem>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmitClauseAst {
    pub pattern: Pattern,
    pub when: Option<ExprAst>,
    pub head: Ident,
    pub args: Vec<ExprAst>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RendezvousDecl {
    pub send: Ident,
    pub receive: Ident,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyDecl {
    pub name: Ident,
    pub body: ExprAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForallDecl {
    pub binders: Vec<Binder>,
    pub body: Vec<Item>,
    pub span: Span,
}

/// Expressions, including the temporal operators. Temporal forms are only
/// legal inside `property` bodies; the static checker enforces that.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Lit(ValueLit),
    /// Pre-event variable reference.
    Ref(Ident),
    /// Post-event variable reference, written `name'`.
    PostRef(Ident),
    /// Component export read, written `var(projection)`.
    Export {
        var: Ident,
        proj: Ident,
        span: Span,
    },
    /// `m(a)`: the measure of the event being applied.
    EventMeasure(Span),
    Not(Box<ExprAst>, Span),
    And(Box<ExprAst>, Box<ExprAst>, Span),
    Or(Box<ExprAst>, Box<ExprAst>, Span),
    Implies(Box<ExprAst>, Box<ExprAst>, Span),
    Cmp(CmpOp, Box<ExprAst>, Box<ExprAst>, Span),
    Add(Box<ExprAst>, Box<ExprAst>, Span),
    Sub(Box<ExprAst>, Box<ExprAst>, Span),
    Mul(Box<ExprAst>, Box<ExprAst>, Span),
    Neg(Box<ExprAst>, Span),
    Next(Box<ExprAst>, Span),
    PossibleNext(Box<ExprAst>, Span),
    Always(Box<ExprAst>, Span),
    Globally(Box<ExprAst>, Span),
    Within(u32, Box<ExprAst>, Span),
    Eventually(Box<ExprAst>, Span),
    Bounded(Ident, Span),
    BoundCompare(Ident, RatLit, Span),
}

impl ExprAst {
    pub fn span(&self) -> Span {
        match self {
            ExprAst::Lit(l) => l.span,
            ExprAst::Ref(id) | ExprAst::PostRef(id) => id.span,
            ExprAst::Export { span, .. } => *span,
            ExprAst::EventMeasure(s)
            | ExprAst::Not(_, s)
            | ExprAst::And(_, _, s)
            | ExprAst::Or(_, _, s)
            | ExprAst::Implies(_, _, s)
            | ExprAst::Cmp(_, _, _, s)
            | ExprAst::Add(_, _, s)
            | ExprAst::Sub(_, _, s)
            | ExprAst::Mul(_, _, s)
            | ExprAst::Neg(_, s)
            | ExprAst::Next(_, s)
            | ExprAst::PossibleNext(_, s)
            | ExprAst::Always(_, s)
            | ExprAst::Globally(_, s)
            | ExprAst::Within(_, _, s)
            | ExprAst::Eventually(_, s)
            | ExprAst::Bounded(_, s)
            | ExprAst::BoundCompare(_, _, s) => *s,
        }
    }

    /// Whether any temporal operator occurs in the tree.
    pub fn has_temporal(&self) -> bool {
        match self {
            ExprAst::Lit(_)
            | ExprAst::Ref(_)
            | ExprAst::PostRef(_)
            | ExprAst::Export { .. }
            | ExprAst::EventMeasure(_) => false,
            ExprAst::Not(x, _) | ExprAst::Neg(x, _) => x.has_temporal(),
            ExprAst::And(l, r, _)
            | ExprAst::Or(l, r, _)
            | ExprAst::Implies(l, r, _)
            | ExprAst::Cmp(_, l, r, _)
            | ExprAst::Add(l, r, _)
            | ExprAst::Sub(l, r, _)
            | ExprAst::Mul(l, r, _) => l.has_temporal() || r.has_temporal(),
            ExprAst::Next(..)
            | ExprAst::PossibleNext(..)
            | ExprAst::Always(..)
            | ExprAst::Globally(..)
            | ExprAst::Within(..)
            | ExprAst::Eventually(..)
            | ExprAst::Bounded(..)
            | ExprAst::BoundCompare(..) => true,
        }
    }

    /// Whether the tree mentions the applied event or a post-event value:
    /// inside a property such an atom reads one transition, not one state.
    pub fn mentions_step(&self) -> bool {
        match self {
            ExprAst::PostRef(_) | ExprAst::EventMeasure(_) => true,
            ExprAst::Lit(_) | ExprAst::Ref(_) | ExprAst::Export { .. } => false,
            ExprAst::Not(x, _) | ExprAst::Neg(x, _) => x.mentions_step(),
            ExprAst::And(l, r, _)
            | ExprAst::Or(l, r, _)
            | ExprAst::Implies(l, r, _)
            | ExprAst::Cmp(_, l, r, _)
            | ExprAst::Add(l, r, _)
            | ExprAst::Sub(l, r, _)
            | ExprAst::Mul(l, r, _) => l.mentions_step() || r.mentions_step(),
            ExprAst::Next(x, _)
            | ExprAst::PossibleNext(x, _)
            | ExprAst::Always(x, _)
            | ExprAst::Globally(x, _)
            | ExprAst::Within(_, x, _)
            | ExprAst::Eventually(x, _) => x.mentions_step(),
            ExprAst::Bounded(..) | ExprAst::BoundCompare(..) => false,
        }
    }
}
