//! Static checking and lowering. Resolves names to tuple slots, infers
//! sorts, enumerates the event alphabet from head declarations, validates
//! measures and rendezvous shapes, and produces a kernel model ready to run.
//!
//! Checking is best-effort: after an error in one declaration it continues
//! with the rest, so one load reports as many problems as it can find.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::composition::{EmitClause, Projection, RendezvousSpec};
use crate::kernel::{
    ClauseGuard, CmpOp, Domain, Event, EventPattern, Expr, GuardDef, HeadSig, MeasureDef, Model,
    PatArg, Sort, UpdateClause, Value, VarDef,
};
use crate::temporal::Property;

use super::ast::*;
use super::expand::{domain_elems, expand};
use super::Diagnostic;

pub(crate) fn check(sm: &SourceModel) -> Result<Model, Vec<Diagnostic>> {
    let expanded = expand(sm).map_err(|d| vec![d])?;
    let mut diags = Vec::new();
    let model = compile(&expanded.items, &[], false, &mut diags);
    if diags.is_empty() {
        Ok(model)
    } else {
        diags.sort_by(|a, b| (a.line, a.col).cmp(&(b.line, b.col)).then(a.message.cmp(&b.message)));
        diags.dedup_by(|a, b| a.line == b.line && a.col == b.col && a.message == b.message);
        Err(diags)
    }
}

/// Where an expression sits, and therefore what it may read. Pre-event
/// values of every slot are always readable.
#[derive(Clone, Copy)]
struct Scope {
    /// Post-event references `v'` are legal at all.
    allow_post: bool,
    /// Slots strictly below this bound may be post-referenced. For an update
    /// clause this is the variable's own index, which is what rules out
    /// forward and circular references.
    post_limit: usize,
    /// The applied event (and so `m(a)`) is in scope.
    allow_event: bool,
}

impl Scope {
    /// Property atom over one state: pre-event values only.
    fn state() -> Scope {
        Scope {
            allow_post: false,
            post_limit: 0,
            allow_event: false,
        }
    }

    /// Definedness guard: pre-event values plus the candidate event.
    fn guard() -> Scope {
        Scope {
            allow_post: false,
            post_limit: 0,
            allow_event: true,
        }
    }

    /// Update clause of the variable at `index`: may read post-event values
    /// of earlier variables.
    fn clause(index: usize) -> Scope {
        Scope {
            allow_post: true,
            post_limit: index,
            allow_event: true,
        }
    }

    /// Transition scope (freeze guards, emit clauses, one-step property
    /// atoms): the whole post-event variable block is visible.
    fn step(num_vars: usize) -> Scope {
        Scope {
            allow_post: true,
            post_limit: num_vars,
            allow_event: true,
        }
    }
}

enum SlotKind {
    Var(Sort),
    Projection,
}

struct Ctx<'a> {
    domains: Vec<Domain>,
    /// Number of leading entries in `domains` inherited from the enclosing
    /// model (components see the outer domain table).
    inherited: usize,
    heads: Vec<HeadSig>,
    /// (name, kind) in slot order: variables first, then projections.
    slots: Vec<(String, SlotKind)>,
    num_vars: usize,
    /// Projection index -> component index.
    proj_comp: Vec<usize>,
    components: Vec<(String, Model)>,
    diags: &'a mut Vec<Diagnostic>,
}

fn compile(
    items: &[Item],
    outer_domains: &[Domain],
    is_component: bool,
    diags: &mut Vec<Diagnostic>,
) -> Model {
    let mut cx = Ctx {
        domains: outer_domains.to_vec(),
        inherited: outer_domains.len(),
        heads: Vec::new(),
        slots: Vec::new(),
        num_vars: 0,
        proj_comp: Vec::new(),
        components: Vec::new(),
        diags,
    };

    cx.collect_domains(items);
    if !is_component {
        cx.collect_components(items);
    }
    let alphabet = cx.collect_alphabet(items);
    let measure = cx.collect_measure(items, &alphabet);
    cx.collect_slots(items, is_component);

    let mut vars = Vec::new();
    let mut guards = Vec::new();
    let mut projections = Vec::new();
    let mut rendezvous: Option<RendezvousSpec> = None;
    let mut properties: Vec<(String, Property)> = Vec::new();
    let mut exports: Vec<usize> = Vec::new();

    for item in items {
        match item {
            Item::Domain(_) | Item::Alphabet(_) | Item::Measure(_) => {}
            Item::Forall(f) => {
                cx.diag(f.span, "internal: unexpanded forall");
            }
            Item::Component(c) => {
                if is_component {
                    cx.diag(c.span, "components cannot be nested");
                }
            }
            Item::Var(v) => vars.push(cx.var(v, vars.len())),
            Item::Guard(g) => {
                let pattern = cx.pattern(&g.pattern);
                let when = g
                    .when
                    .as_ref()
                    .map(|e| cx.bool_expr(e, Scope::guard(), "guard condition"));
                guards.push(GuardDef { pattern, when });
            }
            Item::Export(e) => {
                if !is_component {
                    cx.diag(e.span, "export is only allowed inside a component");
                    continue;
                }
                for name in &e.names {
                    match cx.slot(&name.name) {
                        Some((i, SlotKind::Var(_))) => {
                            if exports.contains(&i) {
                                cx.diag(name.span, format!("`{}` is exported twice", name.name));
                            } else {
                                exports.push(i);
                            }
                        }
                        _ => cx.diag(
                            name.span,
                            format!("export of unknown variable `{}`", name.name),
                        ),
                    }
                }
            }
            Item::Project(p) => {
                if is_component {
                    cx.diag(p.span, "projections are not allowed inside a component");
                    continue;
                }
                // Skip declarations that lost the name to an earlier slot;
                // the surviving ones line up with the projection slots.
                let expected = cx.num_vars + projections.len();
                if !matches!(cx.slot(&p.name.name), Some((i, SlotKind::Projection)) if i == expected)
                {
                    continue;
                }
                if let Some(proj) = cx.project(p, projections.len()) {
                    projections.push(proj);
                }
            }
            Item::Rendezvous(r) => {
                if is_component {
                    cx.diag(r.span, "rendezvous is not allowed inside a component");
                    continue;
                }
                if rendezvous.is_some() {
                    cx.diag(r.span, "rendezvous is declared twice");
                    continue;
                }
                cx.rendezvous_head(&r.send);
                cx.rendezvous_head(&r.receive);
                rendezvous = Some(RendezvousSpec {
                    send_head: r.send.name.clone(),
                    receive_head: r.receive.name.clone(),
                });
            }
            Item::Property(p) => {
                if is_component {
                    cx.diag(p.span, "properties are only allowed at the top level");
                    continue;
                }
                if properties.iter().any(|(n, _)| *n == p.name.name) {
                    cx.diag(
                        p.name.span,
                        format!("property `{}` is declared twice", p.name.name),
                    );
                    continue;
                }
                let body = cx.prop(&p.body);
                properties.push((p.name.name.clone(), body));
            }
        }
    }

    Model {
        domains: cx.domains,
        heads: cx.heads,
        alphabet,
        vars,
        guards,
        measure,
        components: cx.components,
        projections,
        rendezvous,
        properties,
        exports,
    }
}

impl Ctx<'_> {
    fn diag(&mut self, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(span, msg));
    }

    fn domain_index(&self, name: &str) -> Option<usize> {
        self.domains.iter().rposition(|d| d.name == name)
    }

    fn slot(&self, name: &str) -> Option<(usize, &SlotKind)> {
        self.slots
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| (i, &self.slots[i].1))
    }

    fn collect_domains(&mut self, items: &[Item]) {
        for item in items {
            if let Item::Domain(d) = item {
                if self.domains[self.inherited..]
                    .iter()
                    .any(|o| o.name == d.name.name)
                {
                    self.diag(
                        d.name.span,
                        format!("domain `{}` is declared twice", d.name.name),
                    );
                    continue;
                }
                let elems = match domain_elems(d) {
                    Ok(elems) => elems,
                    Err(diag) => {
                        self.diags.push(diag);
                        continue;
                    }
                };
                let mut seen = BTreeSet::new();
                for v in &elems {
                    if !seen.insert(v.clone()) {
                        self.diag(
                            d.span,
                            format!("domain `{}` repeats the element {v}", d.name.name),
                        );
                    }
                }
                self.domains.push(Domain {
                    name: d.name.name.clone(),
                    elems,
                });
            }
        }
    }

    fn collect_components(&mut self, items: &[Item]) {
        for item in items {
            if let Item::Component(c) = item {
                if self.components.iter().any(|(n, _)| *n == c.name.name) {
                    self.diag(
                        c.name.span,
                        format!("component `{}` is declared twice", c.name.name),
                    );
                    continue;
                }
                let inner = compile(&c.items, &self.domains, true, self.diags);
                self.components.push((c.name.name.clone(), inner));
            }
        }
    }

    fn collect_alphabet(&mut self, items: &[Item]) -> Vec<Event> {
        let mut alphabet = Vec::new();
        let mut seen: BTreeSet<Event> = BTreeSet::new();
        for item in items {
            let decl = match item {
                Item::Alphabet(a) => a,
                _ => continue,
            };
            for entry in &decl.entries {
                self.alphabet_entry(entry, &mut alphabet, &mut seen);
            }
        }
        alphabet.sort();
        alphabet
    }

    fn alphabet_entry(
        &mut self,
        entry: &AlphabetEntry,
        alphabet: &mut Vec<Event>,
        seen: &mut BTreeSet<Event>,
    ) {
        let mut binders: Vec<(&str, usize)> = Vec::new();
        let mut ok = true;
        for b in &entry.binders {
            if binders.iter().any(|(n, _)| *n == b.var.name) {
                self.diag(b.var.span, format!("duplicate binder `{}`", b.var.name));
                ok = false;
                continue;
            }
            match self.domain_index(&b.domain.name) {
                Some(i) => binders.push((&b.var.name, i)),
                None => {
                    self.diag(
                        b.domain.span,
                        format!("unknown domain `{}`", b.domain.name),
                    );
                    ok = false;
                }
            }
        }

        let mut arg_domains = Vec::with_capacity(entry.args.len());
        let mut used = vec![false; binders.len()];
        for arg in &entry.args {
            match arg {
                PatArgAst::Wild(span) => {
                    self.diag(
                        *span,
                        "`_` is not allowed in an alphabet declaration; bind a name with `for`",
                    );
                    ok = false;
                }
                PatArgAst::Lit(v) => {
                    arg_domains.push(self.singleton_domain(&entry.head.name, v.value.clone()));
                }
                PatArgAst::Name(id) => {
                    if let Some(pos) = binders.iter().position(|(n, _)| *n == id.name) {
                        used[pos] = true;
                        arg_domains.push(binders[pos].1);
                    } else {
                        arg_domains
                            .push(self.singleton_domain(&entry.head.name, Value::Sym(id.name.clone())));
                    }
                }
            }
        }
        for (pos, b) in entry.binders.iter().enumerate() {
            if pos < used.len() && !used[pos] {
                self.diag(
                    b.var.span,
                    format!("binder `{}` does not appear in the event", b.var.name),
                );
                ok = false;
            }
        }
        if !ok {
            return;
        }

        self.heads.push(HeadSig {
            head: entry.head.name.clone(),
            arg_domains: arg_domains.clone(),
        });

        let mut combos: Vec<Vec<Value>> = vec![Vec::new()];
        for &di in &arg_domains {
            let elems = &self.domains[di].elems;
            let mut next = Vec::with_capacity(combos.len() * elems.len());
            for combo in &combos {
                for v in elems {
                    let mut c = combo.clone();
                    c.push(v.clone());
                    next.push(c);
                }
            }
            combos = next;
        }
        for args in combos {
            let ev = Event::new(entry.head.name.clone(), args);
            if seen.insert(ev.clone()) {
                alphabet.push(ev);
            } else {
                self.diag(entry.span, format!("event {ev} is declared twice"));
            }
        }
    }

    /// A one-element domain for a literal argument position. The `#` in the
    /// name keeps it out of the user namespace.
    fn singleton_domain(&mut self, head: &str, v: Value) -> usize {
        let name = format!("{head}#{}", self.domains.len());
        self.domains.push(Domain {
            name,
            elems: vec![v],
        });
        self.domains.len() - 1
    }

    fn collect_measure(&mut self, items: &[Item], alphabet: &[Event]) -> MeasureDef {
        let mut def = MeasureDef::default();
        let mut default_span: Option<Span> = None;
        for item in items {
            let decl = match item {
                Item::Measure(m) => m,
                _ => continue,
            };
            for clause in &decl.clauses {
                let pattern = self.pattern(&clause.pattern);
                if clause.value.value.is_negative() {
                    self.diag(clause.span, "measure values must be nonnegative");
                    continue;
                }
                def.clauses.push((pattern, clause.value.value.clone()));
            }
            if let Some(d) = &decl.default {
                if default_span.is_some() {
                    self.diag(decl.span, "measure default is declared twice");
                } else if d.value.is_negative() {
                    self.diag(d.span, "measure values must be nonnegative");
                } else {
                    default_span = Some(decl.span);
                    def.default = Some(d.value.clone());
                }
            }
        }
        if !def.clauses.is_empty() && def.default.is_none() {
            for ev in alphabet {
                if !def.clauses.iter().any(|(p, _)| p.matches(ev)) {
                    self.diag(
                        Span::new(1, 1),
                        format!("no measure clause matches {ev}; add a default"),
                    );
                }
            }
        }
        def
    }

    fn collect_slots(&mut self, items: &[Item], is_component: bool) {
        for item in items {
            let (name, kind) = match item {
                Item::Var(v) => (&v.name, SlotKind::Var(v.sort.sort.clone())),
                Item::Project(p) if !is_component => (&p.name, SlotKind::Projection),
                _ => continue,
            };
            if name.name == "a" || name.name == "m" {
                self.diag(name.span, format!("the name `{}` is reserved", name.name));
                continue;
            }
            if self.slot(&name.name).is_some() {
                self.diag(name.span, format!("`{}` is declared twice", name.name));
                continue;
            }
            if matches!(kind, SlotKind::Var(_)) {
                self.slots.insert(self.num_vars, (name.name.clone(), kind));
                self.num_vars += 1;
            } else {
                let Item::Project(p) = item else { unreachable!() };
                let comp = self
                    .components
                    .iter()
                    .position(|(n, _)| *n == p.component.name);
                if comp.is_none() {
                    self.diag(
                        p.component.span,
                        format!("unknown component `{}`", p.component.name),
                    );
                }
                self.slots.push((name.name.clone(), kind));
                self.proj_comp.push(comp.unwrap_or(usize::MAX));
            }
        }
    }

    fn var(&mut self, v: &VarDecl, index: usize) -> VarDef {
        let sort = v.sort.sort.clone();
        if v.init.value.sort() != sort {
            self.diag(
                v.init.span,
                format!(
                    "initial value has sort {}, but `{}` is declared {}",
                    v.init.value.sort(),
                    v.name.name,
                    sort
                ),
            );
        }
        let sc = Scope::clause(index);
        let mut clauses = Vec::new();
        for item in &v.clauses {
            let c = match item {
                ClauseItem::One(c) => c,
                ClauseItem::Forall(f) => {
                    self.diag(f.span, "internal: unexpanded forall");
                    continue;
                }
            };
            let guard = match &c.guard {
                ClauseGuardAst::On { pattern, when } => ClauseGuard::Event {
                    pattern: self.pattern(pattern),
                    when: when
                        .as_ref()
                        .map(|e| self.bool_expr(e, sc, "clause condition")),
                },
                ClauseGuardAst::When(e) => {
                    ClauseGuard::Expr(self.bool_expr(e, sc, "clause guard"))
                }
            };
            let value = self.sorted_expr(&c.body, sc, &sort, "clause value");
            clauses.push(UpdateClause { guard, value });
        }
        let otherwise = self.sorted_expr(&v.otherwise, sc, &sort, "otherwise value");
        VarDef {
            name: v.name.name.clone(),
            sort,
            init: v.init.value.clone(),
            clauses,
            otherwise,
        }
    }

    fn project(&mut self, p: &ProjectDecl, proj_index: usize) -> Option<Projection> {
        let comp_index = *self.proj_comp.get(proj_index)?;
        if comp_index == usize::MAX {
            return None;
        }
        let sc = Scope::step(self.num_vars);
        let freeze = self.bool_expr(&p.freeze, sc, "freeze guard");
        let mut emit = Vec::new();
        for item in &p.emit {
            let c = match item {
                EmitItem::One(c) => c,
                EmitItem::Forall(f) => {
                    self.diag(f.span, "internal: unexpanded forall");
                    continue;
                }
            };
            let pattern = self.pattern(&c.pattern);
            let when = c
                .when
                .as_ref()
                .map(|e| self.bool_expr(e, sc, "emit condition"));
            self.check_component_head(comp_index, &c.head, c.args.len());
            let args = c.args.iter().map(|a| self.expr(a, sc).0).collect();
            emit.push(EmitClause {
                pattern,
                when,
                head: c.head.name.clone(),
                args,
            });
        }
        let for_id = match &p.for_id {
            Some(v) => v.value.clone(),
            None => Value::Sym(p.name.name.clone()),
        };
        Some(Projection {
            name: p.name.name.clone(),
            for_id,
            component: comp_index,
            freeze,
            emit,
        })
    }

    fn check_component_head(&mut self, comp_index: usize, head: &Ident, arity: usize) {
        let comp = &self.components[comp_index].1;
        let sigs: Vec<usize> = comp
            .heads
            .iter()
            .filter(|h| h.head == head.name)
            .map(|h| h.arg_domains.len())
            .collect();
        if sigs.is_empty() {
            let comp_name = &self.components[comp_index].0;
            self.diag(
                head.span,
                format!(
                    "component `{comp_name}` declares no event head `{}`",
                    head.name
                ),
            );
        } else if !sigs.contains(&arity) {
            self.diag(
                head.span,
                format!("`{}` takes {} argument(s), not {arity}", head.name, sigs[0]),
            );
        }
    }

    fn rendezvous_head(&mut self, head: &Ident) {
        let mut declared = false;
        for (name, comp) in &self.components {
            for sig in &comp.heads {
                if sig.head == head.name {
                    declared = true;
                    if sig.arg_domains.len() != 2 {
                        self.diags.push(Diagnostic::new(
                            head.span,
                            format!(
                                "rendezvous head `{}` must take two arguments \
                                 (value, peer), but component `{name}` declares {}",
                                head.name,
                                sig.arg_domains.len()
                            ),
                        ));
                    }
                }
            }
        }
        if !declared {
            self.diag(
                head.span,
                format!("no component declares the rendezvous head `{}`", head.name),
            );
        }
    }

    /// Compile an event pattern and check it can match a declared event.
    fn pattern(&mut self, p: &Pattern) -> EventPattern {
        let args: Vec<PatArg> = p
            .args
            .iter()
            .map(|a| match a {
                PatArgAst::Wild(_) => PatArg::Wild,
                PatArgAst::Lit(v) => PatArg::Lit(v.value.clone()),
                PatArgAst::Name(id) => PatArg::Lit(Value::Sym(id.name.clone())),
            })
            .collect();
        let sigs: Vec<&HeadSig> = self
            .heads
            .iter()
            .filter(|h| h.head == p.head.name)
            .collect();
        if sigs.is_empty() {
            self.diags.push(Diagnostic::new(
                p.head.span,
                format!("unknown event head `{}`", p.head.name),
            ));
        } else {
            let arity_ok: Vec<&&HeadSig> = sigs
                .iter()
                .filter(|h| h.arg_domains.len() == args.len())
                .collect();
            if arity_ok.is_empty() {
                self.diags.push(Diagnostic::new(
                    p.span,
                    format!(
                        "`{}` takes {} argument(s), not {}",
                        p.head.name,
                        sigs[0].arg_domains.len(),
                        args.len()
                    ),
                ));
            } else {
                for (i, arg) in args.iter().enumerate() {
                    if let PatArg::Lit(v) = arg {
                        let possible = arity_ok
                            .iter()
                            .any(|h| self.domains[h.arg_domains[i]].elems.contains(v));
                        if !possible {
                            self.diags.push(Diagnostic::new(
                                p.span,
                                format!(
                                    "{v} is not a possible argument {} of `{}`",
                                    i + 1,
                                    p.head.name
                                ),
                            ));
                        }
                    }
                }
            }
        }
        EventPattern {
            head: p.head.name.clone(),
            args,
        }
    }

    fn want_bool(&mut self, sort: Option<Sort>, span: Span, what: &str) {
        if let Some(s) = sort {
            if s != Sort::Bool {
                self.diag(span, format!("{what} must be bool, found {s}"));
            }
        }
    }

    fn bool_expr(&mut self, e: &ExprAst, sc: Scope, what: &str) -> Expr {
        let (ex, sort) = self.expr(e, sc);
        self.want_bool(sort, e.span(), what);
        ex
    }

    fn sorted_expr(&mut self, e: &ExprAst, sc: Scope, want: &Sort, what: &str) -> Expr {
        let (ex, sort) = self.expr(e, sc);
        if let Some(s) = sort {
            if s != *want {
                self.diag(e.span(), format!("{what} must be {want}, found {s}"));
            }
        }
        ex
    }

    /// Compile an expression. The sort is `None` when a diagnostic was
    /// already issued for this subtree, which suppresses cascade errors.
    fn expr(&mut self, e: &ExprAst, sc: Scope) -> (Expr, Option<Sort>) {
        match e {
            ExprAst::Lit(v) => {
                let sort = v.value.sort();
                (Expr::Lit(v.value.clone()), Some(sort))
            }
            ExprAst::Ref(id) => match self.slot(&id.name) {
                Some((i, SlotKind::Var(sort))) => (Expr::Pre(i), Some(sort.clone())),
                Some((i, SlotKind::Projection)) => (Expr::Pre(i), Some(Sort::Component)),
                None => {
                    let msg = if self.components.iter().any(|(n, _)| *n == id.name) {
                        format!(
                            "`{}` is a component; read its exports through a projection",
                            id.name
                        )
                    } else {
                        format!("unknown variable `{}`", id.name)
                    };
                    self.diag(id.span, msg);
                    (Expr::Lit(Value::Bool(false)), None)
                }
            },
            ExprAst::PostRef(id) => {
                let dummy = (Expr::Lit(Value::Bool(false)), None);
                if !sc.allow_post {
                    self.diag(
                        id.span,
                        format!("`{}'` is a post-event reference, which is not available here", id.name),
                    );
                    return dummy;
                }
                match self.slot(&id.name) {
                    Some((i, SlotKind::Var(sort))) => {
                        if i < sc.post_limit {
                            (Expr::Post(i), Some(sort.clone()))
                        } else if sc.post_limit < self.num_vars {
                            self.diag(
                                id.span,
                                format!(
                                    "`{}'` refers to this variable or a later one; \
                                     post-event references only look backward",
                                    id.name
                                ),
                            );
                            dummy
                        } else {
                            self.diag(
                                id.span,
                                format!("unknown variable `{}`", id.name),
                            );
                            dummy
                        }
                    }
                    Some((_, SlotKind::Projection)) => {
                        self.diag(
                            id.span,
                            format!("`{}` is a projection; it has no post-event reference", id.name),
                        );
                        dummy
                    }
                    None => {
                        self.diag(id.span, format!("unknown variable `{}`", id.name));
                        dummy
                    }
                }
            }
            ExprAst::Export { var, proj, span } => {
                let dummy = (Expr::Lit(Value::Bool(false)), None);
                let (slot, pi) = match self.slot(&proj.name) {
                    Some((i, SlotKind::Projection)) => (i, i - self.num_vars),
                    Some((_, SlotKind::Var(_))) => {
                        self.diag(proj.span, format!("`{}` is not a projection", proj.name));
                        return dummy;
                    }
                    None => {
                        self.diag(proj.span, format!("unknown projection `{}`", proj.name));
                        return dummy;
                    }
                };
                let comp_index = self.proj_comp[pi];
                if comp_index == usize::MAX {
                    return dummy;
                }
                let (comp_name, comp) = &self.components[comp_index];
                let vi = comp
                    .vars
                    .iter()
                    .position(|v| v.name == var.name)
                    .filter(|i| comp.exports.contains(i));
                match vi {
                    Some(vi) => {
                        let sort = comp.vars[vi].sort.clone();
                        (Expr::CompExport { slot, export: vi }, Some(sort))
                    }
                    None => {
                        self.diags.push(Diagnostic::new(
                            *span,
                            format!(
                                "component `{comp_name}` does not export `{}`",
                                var.name
                            ),
                        ));
                        dummy
                    }
                }
            }
            ExprAst::EventMeasure(span) => {
                if sc.allow_event {
                    (Expr::MeasureOfEvent, Some(Sort::Rat))
                } else {
                    self.diag(*span, "`m(a)` reads the applied event, which is not available here");
                    (Expr::Lit(Value::Bool(false)), None)
                }
            }
            ExprAst::Not(x, _) => {
                let ex = self.bool_expr(x, sc, "operand of `not`");
                (Expr::Not(Box::new(ex)), Some(Sort::Bool))
            }
            ExprAst::And(l, r, _) => self.bool_binop(l, r, sc, "and", Expr::And),
            ExprAst::Or(l, r, _) => self.bool_binop(l, r, sc, "or", Expr::Or),
            ExprAst::Implies(l, r, _) => self.bool_binop(l, r, sc, "implies", Expr::Implies),
            ExprAst::Cmp(op, l, r, span) => {
                let (le, ls) = self.expr(l, sc);
                let (re, rs) = self.expr(r, sc);
                match op {
                    CmpOp::Eq | CmpOp::Ne => {
                        if let (Some(a), Some(b)) = (&ls, &rs) {
                            if a != b {
                                self.diag(*span, format!("cannot compare {a} with {b}"));
                            } else if *a == Sort::Component {
                                self.diag(*span, "cannot compare component states");
                            }
                        }
                    }
                    _ => {
                        for (s, side) in [(&ls, l), (&rs, r)] {
                            if let Some(s) = s {
                                if *s != Sort::Rat {
                                    self.diag(
                                        side.span(),
                                        format!("ordered comparison needs rat, found {s}"),
                                    );
                                }
                            }
                        }
                    }
                }
                (
                    Expr::Cmp(*op, Box::new(le), Box::new(re)),
                    Some(Sort::Bool),
                )
            }
            ExprAst::Add(l, r, _) => self.rat_binop(l, r, sc, Expr::Add),
            ExprAst::Sub(l, r, _) => self.rat_binop(l, r, sc, Expr::Sub),
            ExprAst::Mul(l, r, _) => self.rat_binop(l, r, sc, Expr::Mul),
            ExprAst::Neg(x, _) => {
                let ex = self.rat_operand(x, sc);
                (Expr::Neg(Box::new(ex)), Some(Sort::Rat))
            }
            ExprAst::Next(_, s)
            | ExprAst::PossibleNext(_, s)
            | ExprAst::Always(_, s)
            | ExprAst::Globally(_, s)
            | ExprAst::Within(_, _, s)
            | ExprAst::Eventually(_, s)
            | ExprAst::Bounded(_, s)
            | ExprAst::BoundCompare(_, _, s) => {
                self.diag(
                    *s,
                    "temporal operators are only allowed inside property definitions",
                );
                (Expr::Lit(Value::Bool(false)), None)
            }
        }
    }

    fn bool_binop(
        &mut self,
        l: &ExprAst,
        r: &ExprAst,
        sc: Scope,
        name: &str,
        build: fn(Box<Expr>, Box<Expr>) -> Expr,
    ) -> (Expr, Option<Sort>) {
        let le = self.bool_expr(l, sc, &format!("operand of `{name}`"));
        let re = self.bool_expr(r, sc, &format!("operand of `{name}`"));
        (build(Box::new(le), Box::new(re)), Some(Sort::Bool))
    }

    fn rat_binop(
        &mut self,
        l: &ExprAst,
        r: &ExprAst,
        sc: Scope,
        build: fn(Box<Expr>, Box<Expr>) -> Expr,
    ) -> (Expr, Option<Sort>) {
        let le = self.rat_operand(l, sc);
        let re = self.rat_operand(r, sc);
        (build(Box::new(le), Box::new(re)), Some(Sort::Rat))
    }

    fn rat_operand(&mut self, e: &ExprAst, sc: Scope) -> Expr {
        let (ex, sort) = self.expr(e, sc);
        if let Some(s) = sort {
            if s != Sort::Rat {
                self.diag(e.span(), format!("arithmetic needs rat, found {s}"));
            }
        }
        ex
    }

    /// Compile a property body. A maximal temporal-free subtree becomes one
    /// atom; an atom that mentions the applied event or a post-event value
    /// quantifies over one transition, everything else reads one state.
    fn prop(&mut self, e: &ExprAst) -> Property {
        if !e.has_temporal() {
            return if e.mentions_step() {
                let ex = self.bool_expr(e, Scope::step(self.num_vars), "property atom");
                Property::NextAtom(ex)
            } else {
                let ex = self.bool_expr(e, Scope::state(), "property atom");
                Property::Atom(ex)
            };
        }
        match e {
            ExprAst::Not(x, _) => Property::Not(Box::new(self.prop(x))),
            ExprAst::And(l, r, _) => {
                Property::And(Box::new(self.prop(l)), Box::new(self.prop(r)))
            }
            ExprAst::Or(l, r, _) => {
                Property::Or(Box::new(self.prop(l)), Box::new(self.prop(r)))
            }
            ExprAst::Implies(l, r, _) => {
                Property::Implies(Box::new(self.prop(l)), Box::new(self.prop(r)))
            }
            ExprAst::Next(x, _) => Property::Next(Box::new(self.prop(x))),
            ExprAst::PossibleNext(x, _) => Property::PossibleNext(Box::new(self.prop(x))),
            ExprAst::Always(x, _) => Property::Always(Box::new(self.prop(x))),
            ExprAst::Globally(x, _) => Property::Globally(Box::new(self.prop(x))),
            ExprAst::Within(n, x, _) => Property::Within(*n, Box::new(self.prop(x))),
            ExprAst::Eventually(x, _) => Property::Eventually(Box::new(self.prop(x))),
            ExprAst::Bounded(id, _) => match self.rat_var_slot(id) {
                Some(i) => Property::Bounded(i),
                None => Property::Atom(Expr::Lit(Value::Bool(false))),
            },
            ExprAst::BoundCompare(id, k, _) => match self.rat_var_slot(id) {
                Some(i) => Property::BoundCompare(i, k.value.clone()),
                None => Property::Atom(Expr::Lit(Value::Bool(false))),
            },
            other => {
                self.diag(
                    other.span(),
                    "temporal operators cannot appear under comparison or arithmetic",
                );
                Property::Atom(Expr::Lit(Value::Bool(false)))
            }
        }
    }

    fn rat_var_slot(&mut self, id: &Ident) -> Option<usize> {
        match self.slot(&id.name) {
            Some((i, SlotKind::Var(Sort::Rat))) => Some(i),
            Some((_, SlotKind::Var(s))) => {
                let s = s.clone();
                self.diag(
                    id.span,
                    format!("`bounded` needs a rat variable; `{}` is {s}", id.name),
                );
                None
            }
            Some((_, SlotKind::Projection)) => {
                self.diag(
                    id.span,
                    format!("`bounded` needs a rat variable; `{}` is a projection", id.name),
                );
                None
            }
            None => {
                self.diag(id.span, format!("unknown variable `{}`", id.name));
                None
            }
        }
    }
}
