//! Multi-sorted equational theory presentations.
//!
//! A presentation declares sorts, operation symbols typed `word -> sort`,
//! and equations between integer-linear combinations of terms. Linear
//! combinations (rather than bare term pairs) are the native notion of
//! equation here: a relation like `x(x(a)) = 0` needs an empty right-hand
//! side, and a relation like `m(a,b) = a + b` needs coefficients.
//!
//! Contexts are positional: a term's variables are indices into a context
//! word. Surface syntax uses named variables; the parser resolves them.

use std::collections::BTreeMap;
use std::fmt;

/// Index of a sort within its presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub usize);

/// Index of an operation symbol within its presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub usize);

/// A finite word over the sort alphabet; the empty word is valid and plays
/// the role of the zero object downstream.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<SortId>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn single(s: SortId) -> Word {
        Word(vec![s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[SortId] {
        &self.0
    }
}

/// An operation symbol `name : domain -> codomain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationSymbol {
    pub name: String,
    pub domain: Word,
    pub codomain: SortId,
}

/// A term over a context word: either a variable (position into the
/// context) or an operation applied to argument terms. All subterms of a
/// well-sorted term share the same context.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    Apply(OpId, Vec<Term>),
}

impl Term {
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Apply(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

/// An integer-linear combination of terms sharing one context and sort.
/// Zero coefficients are pruned; the empty combination is the zero morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearTermCombination {
    pub context: Word,
    pub sort: SortId,
    pub summands: BTreeMap<Term, i64>,
}

impl LinearTermCombination {
    pub fn zero(context: Word, sort: SortId) -> Self {
        LinearTermCombination {
            context,
            sort,
            summands: BTreeMap::new(),
        }
    }

    pub fn single(context: Word, sort: SortId, term: Term) -> Self {
        let mut c = Self::zero(context, sort);
        c.add_term(term, 1);
        c
    }

    pub fn add_term(&mut self, term: Term, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.summands.entry(term).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            let key = self
                .summands
                .iter()
                .find(|(_, &v)| v == 0)
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.summands.remove(&k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// `self - other`; both sides must share context and sort.
    pub fn sub(&self, other: &LinearTermCombination) -> LinearTermCombination {
        assert_eq!(self.context, other.context);
        assert_eq!(self.sort, other.sort);
        let mut out = self.clone();
        for (t, &c) in &other.summands {
            out.add_term(t.clone(), -c);
        }
        out
    }
}

/// An equation `lhs = rhs`; both sides share one context and sort.
/// `var_names` records the surface variable names for printing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: LinearTermCombination,
    pub rhs: LinearTermCombination,
    pub var_names: Vec<String>,
}

impl Equation {
    pub fn context(&self) -> &Word {
        &self.lhs.context
    }

    pub fn sort(&self) -> SortId {
        self.lhs.sort
    }
}

/// A validated theory presentation. Construct through the parser or
/// [`TheoryPresentation::build`]; both enforce the cross-reference
/// invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryPresentation {
    pub name: String,
    sorts: Vec<String>,
    ops: Vec<OperationSymbol>,
    equations: Vec<Equation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryError {
    DuplicateSort(String),
    DuplicateOp(String),
    UnknownSort(String),
    VarOutOfRange { index: usize, context_len: usize },
    VarSortMismatch { index: usize, expected: String, found: String },
    ArityMismatch { op: String, expected: usize, found: usize },
    ArgSortMismatch { op: String, position: usize, expected: String, found: String },
    EquationSortMismatch { lhs: String, rhs: String },
    EmptyIdentifier,
}

impl fmt::Display for TheoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryError::DuplicateSort(s) => write!(f, "duplicate sort `{s}`"),
            TheoryError::DuplicateOp(s) => write!(f, "duplicate operation `{s}`"),
            TheoryError::UnknownSort(s) => write!(f, "unknown sort `{s}`"),
            TheoryError::VarOutOfRange { index, context_len } => {
                write!(f, "variable #{index} out of range for context of length {context_len}")
            }
            TheoryError::VarSortMismatch { index, expected, found } => {
                write!(f, "variable #{index} has sort {found}, expected {expected}")
            }
            TheoryError::ArityMismatch { op, expected, found } => {
                write!(f, "operation `{op}` expects {expected} arguments, got {found}")
            }
            TheoryError::ArgSortMismatch { op, position, expected, found } => write!(
                f,
                "argument {position} of `{op}` has sort {found}, expected {expected}"
            ),
            TheoryError::EquationSortMismatch { lhs, rhs } => {
                write!(f, "equation sides have different sorts: {lhs} vs {rhs}")
            }
            TheoryError::EmptyIdentifier => write!(f, "empty identifier"),
        }
    }
}

impl std::error::Error for TheoryError {}

impl TheoryPresentation {
    /// Assemble and validate a presentation from raw parts.
    pub fn build(
        name: String,
        sorts: Vec<String>,
        ops: Vec<OperationSymbol>,
        equations: Vec<Equation>,
    ) -> Result<Self, TheoryError> {
        let mut seen = BTreeMap::new();
        for (i, s) in sorts.iter().enumerate() {
            if s.is_empty() {
                return Err(TheoryError::EmptyIdentifier);
            }
            if seen.insert(s.clone(), i).is_some() {
                return Err(TheoryError::DuplicateSort(s.clone()));
            }
        }
        let mut op_seen = BTreeMap::new();
        for (i, op) in ops.iter().enumerate() {
            if op.name.is_empty() {
                return Err(TheoryError::EmptyIdentifier);
            }
            if op_seen.insert(op.name.clone(), i).is_some() {
                return Err(TheoryError::DuplicateOp(op.name.clone()));
            }
            for s in op.domain.letters() {
                if s.0 >= sorts.len() {
                    return Err(TheoryError::UnknownSort(format!("#{}", s.0)));
                }
            }
            if op.codomain.0 >= sorts.len() {
                return Err(TheoryError::UnknownSort(format!("#{}", op.codomain.0)));
            }
        }
        let theory = TheoryPresentation {
            name,
            sorts,
            ops,
            equations: Vec::new(),
        };
        for eq in &equations {
            theory.check_combination(&eq.lhs)?;
            theory.check_combination(&eq.rhs)?;
            if eq.lhs.context != eq.rhs.context || eq.lhs.sort != eq.rhs.sort {
                return Err(TheoryError::EquationSortMismatch {
                    lhs: theory.sort_name(eq.lhs.sort).to_string(),
                    rhs: theory.sort_name(eq.rhs.sort).to_string(),
                });
            }
        }
        Ok(TheoryPresentation { equations, ..theory })
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn sort_ids(&self) -> impl Iterator<Item = SortId> {
        (0..self.sorts.len()).map(SortId)
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.0]
    }

    pub fn sort_by_name(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name).map(SortId)
    }

    pub fn ops(&self) -> &[OperationSymbol] {
        &self.ops
    }

    pub fn op(&self, id: OpId) -> &OperationSymbol {
        &self.ops[id.0]
    }

    pub fn op_ids(&self) -> impl Iterator<Item = OpId> {
        (0..self.ops.len()).map(OpId)
    }

    pub fn op_by_name(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name).map(OpId)
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// The word whose letters are all sorts in declaration order; the default
    /// index set is its single-letter subwords.
    pub fn sort_words(&self) -> Vec<Word> {
        self.sort_ids().map(Word::single).collect()
    }

    /// Check that every letter of `w` is declared.
    pub fn check_word(&self, w: &Word) -> Result<(), TheoryError> {
        for s in w.letters() {
            if s.0 >= self.sorts.len() {
                return Err(TheoryError::UnknownSort(format!("#{}", s.0)));
            }
        }
        Ok(())
    }

    /// Sort-check a term in a context; returns the unique sort.
    pub fn well_sorted(&self, term: &Term, context: &Word) -> Result<SortId, TheoryError> {
        match term {
            Term::Var(i) => context
                .letters()
                .get(*i)
                .copied()
                .ok_or(TheoryError::VarOutOfRange {
                    index: *i,
                    context_len: context.len(),
                }),
            Term::Apply(op_id, args) => {
                let op = self.op(*op_id);
                if args.len() != op.domain.len() {
                    return Err(TheoryError::ArityMismatch {
                        op: op.name.clone(),
                        expected: op.domain.len(),
                        found: args.len(),
                    });
                }
                for (pos, (arg, expected)) in args.iter().zip(op.domain.letters()).enumerate() {
                    let found = self.well_sorted(arg, context)?;
                    if found != *expected {
                        return Err(TheoryError::ArgSortMismatch {
                            op: op.name.clone(),
                            position: pos,
                            expected: self.sort_name(*expected).to_string(),
                            found: self.sort_name(found).to_string(),
                        });
                    }
                }
                Ok(op.codomain)
            }
        }
    }

    /// Sort-check a whole combination against its recorded context and sort.
    pub fn check_combination(&self, comb: &LinearTermCombination) -> Result<(), TheoryError> {
        self.check_word(&comb.context)?;
        if comb.sort.0 >= self.sorts.len() {
            return Err(TheoryError::UnknownSort(format!("#{}", comb.sort.0)));
        }
        for term in comb.summands.keys() {
            let s = self.well_sorted(term, &comb.context)?;
            if s != comb.sort {
                return Err(TheoryError::VarSortMismatch {
                    index: 0,
                    expected: self.sort_name(comb.sort).to_string(),
                    found: self.sort_name(s).to_string(),
                });
            }
        }
        Ok(())
    }

    /// Capture-free simultaneous substitution: replace variable `i` of the
    /// old context by `assignment[i]`, a term over `new_context`. Like terms
    /// are collected (with cancellation).
    pub fn substitute(
        &self,
        comb: &LinearTermCombination,
        assignment: &[Term],
        new_context: &Word,
    ) -> Result<LinearTermCombination, TheoryError> {
        if assignment.len() != comb.context.len() {
            return Err(TheoryError::ArityMismatch {
                op: "<substitution>".to_string(),
                expected: comb.context.len(),
                found: assignment.len(),
            });
        }
        for (i, (t, expected)) in assignment.iter().zip(comb.context.letters()).enumerate() {
            let found = self.well_sorted(t, new_context)?;
            if found != *expected {
                return Err(TheoryError::VarSortMismatch {
                    index: i,
                    expected: self.sort_name(*expected).to_string(),
                    found: self.sort_name(found).to_string(),
                });
            }
        }
        let mut out = LinearTermCombination::zero(new_context.clone(), comb.sort);
        for (term, &coeff) in &comb.summands {
            out.add_term(substitute_term(term, assignment), coeff);
        }
        Ok(out)
    }

    /// Display a term with the given variable names (falling back to `v<i>`).
    pub fn render_term(&self, term: &Term, var_names: &[String]) -> String {
        match term {
            Term::Var(i) => var_names
                .get(*i)
                .cloned()
                .unwrap_or_else(|| format!("v{i}")),
            Term::Apply(op, args) => {
                let name = &self.op(*op).name;
                if args.is_empty() {
                    format!("{name}()")
                } else {
                    let rendered: Vec<String> = args
                        .iter()
                        .map(|a| self.render_term(a, var_names))
                        .collect();
                    format!("{name}({})", rendered.join(", "))
                }
            }
        }
    }

    pub fn render_combination(&self, comb: &LinearTermCombination, var_names: &[String]) -> String {
        if comb.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (term, &coeff)) in comb.summands.iter().enumerate() {
            let mag = coeff.abs();
            if i == 0 {
                if coeff < 0 {
                    out.push_str("- ");
                }
            } else if coeff < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if mag != 1 {
                out.push_str(&format!("{mag} "));
            }
            out.push_str(&self.render_term(term, var_names));
        }
        out
    }

    /// Pretty-print the whole presentation in the surface grammar; the
    /// output re-parses to a structurally equal presentation.
    pub fn render(&self) -> String {
        let mut out = format!("theory {} {{\n", self.name);
        for s in &self.sorts {
            out.push_str(&format!("  sort {s};\n"));
        }
        for op in &self.ops {
            let dom: Vec<&str> = op
                .domain
                .letters()
                .iter()
                .map(|s| self.sort_name(*s))
                .collect();
            out.push_str(&format!(
                "  op {} : {} -> {};\n",
                op.name,
                dom.join(", "),
                self.sort_name(op.codomain)
            ));
        }
        for eq in &self.equations {
            out.push_str(&format!(
                "  eq {} = {};\n",
                self.render_combination(&eq.lhs, &eq.var_names),
                self.render_combination(&eq.rhs, &eq.var_names)
            ));
        }
        out.push('}');
        out
    }

    /// Render a word for reports: sort names joined with `.`, `_` for the
    /// empty word.
    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "_".to_string();
        }
        w.letters()
            .iter()
            .map(|s| self.sort_name(*s))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parse a word from report syntax: `_` or sort names joined with `.`;
    /// an undotted string is also accepted when it segments uniquely into
    /// declared sort names by greedy longest match.
    pub fn parse_word(&self, s: &str) -> Result<Word, TheoryError> {
        let s = s.trim();
        if s.is_empty() || s == "_" {
            return Ok(Word::empty());
        }
        if s.contains('.') {
            let mut letters = Vec::new();
            for part in s.split('.') {
                letters.push(
                    self.sort_by_name(part.trim())
                        .ok_or_else(|| TheoryError::UnknownSort(part.trim().to_string()))?,
                );
            }
            return Ok(Word(letters));
        }
        // greedy longest-match segmentation
        let mut letters = Vec::new();
        let mut rest = s;
        'outer: while !rest.is_empty() {
            let mut candidates: Vec<(usize, SortId)> = self
                .sorts
                .iter()
                .enumerate()
                .filter(|(_, name)| rest.starts_with(name.as_str()))
                .map(|(i, name)| (name.len(), SortId(i)))
                .collect();
            candidates.sort_by(|a, b| b.0.cmp(&a.0));
            if let Some(&(len, sid)) = candidates.first() {
                letters.push(sid);
                rest = &rest[len..];
                continue 'outer;
            }
            return Err(TheoryError::UnknownSort(rest.to_string()));
        }
        Ok(Word(letters))
    }
}

fn substitute_term(term: &Term, assignment: &[Term]) -> Term {
    match term {
        Term::Var(i) => assignment[*i].clone(),
        Term::Apply(op, args) => Term::Apply(
            *op,
            args.iter().map(|a| substitute_term(a, assignment)).collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_theory;

    fn n2() -> TheoryPresentation {
        parse_theory("theory N2 { sort V; op x : V -> V; eq x(x(a)) = 0; }").unwrap()
    }

    #[test]
    fn well_sorted_variable_lookup() {
        let t = n2();
        let v = t.sort_by_name("V").unwrap();
        let ctx = Word::single(v);
        assert_eq!(t.well_sorted(&Term::Var(0), &ctx).unwrap(), v);
    }

    #[test]
    fn well_sorted_composition() {
        let t = n2();
        let v = t.sort_by_name("V").unwrap();
        let x = t.op_by_name("x").unwrap();
        let ctx = Word::single(v);
        let term = Term::Apply(x, vec![Term::Apply(x, vec![Term::Var(0)])]);
        assert_eq!(t.well_sorted(&term, &ctx).unwrap(), v);
    }

    #[test]
    fn well_sorted_sort_clash() {
        let t =
            parse_theory("theory T { sort V; sort W; op x : V -> V; }").unwrap();
        let w = t.sort_by_name("W").unwrap();
        let x = t.op_by_name("x").unwrap();
        let ctx = Word::single(w);
        let term = Term::Apply(x, vec![Term::Var(0)]);
        assert!(t.well_sorted(&term, &ctx).is_err());
    }

    #[test]
    fn substitute_identity_law() {
        let t = n2();
        let v = t.sort_by_name("V").unwrap();
        let ctx = Word::single(v);
        let comb = LinearTermCombination::single(ctx.clone(), v, Term::Var(0));
        let out = t
            .substitute(&comb, &[Term::Var(0)], &ctx)
            .unwrap();
        assert_eq!(out, comb);
    }

    #[test]
    fn substitute_renaming() {
        let t = n2();
        let v = t.sort_by_name("V").unwrap();
        let x = t.op_by_name("x").unwrap();
        let ctx1 = Word::single(v);
        let ctx2 = Word(vec![v, v]);
        let mut comb = LinearTermCombination::zero(ctx1, v);
        comb.add_term(Term::Apply(x, vec![Term::Var(0)]), 2);
        let out = t.substitute(&comb, &[Term::Var(1)], &ctx2).unwrap();
        let mut expect = LinearTermCombination::zero(ctx2, v);
        expect.add_term(Term::Apply(x, vec![Term::Var(1)]), 2);
        assert_eq!(out, expect);
    }

    #[test]
    fn substitute_into_difference() {
        // substitute a -> x(b) into lhs - rhs of x(x(a)) = 0 gives x(x(x(b)))
        let t = n2();
        let v = t.sort_by_name("V").unwrap();
        let x = t.op_by_name("x").unwrap();
        let eq = &t.equations()[0];
        let diff = eq.lhs.sub(&eq.rhs);
        let new_ctx = Word::single(v);
        let out = t
            .substitute(&diff, &[Term::Apply(x, vec![Term::Var(0)])], &new_ctx)
            .unwrap();
        let mut expect = LinearTermCombination::zero(new_ctx, v);
        expect.add_term(
            Term::Apply(x, vec![Term::Apply(x, vec![Term::Apply(x, vec![Term::Var(0)])])]),
            1,
        );
        assert_eq!(out, expect);
    }

    #[test]
    fn substitution_is_associative() {
        // substituting sigma then tau equals substituting the composite
        let t = n2();
        let v = t.sort_by_name("V").unwrap();
        let x = t.op_by_name("x").unwrap();
        let ctx = Word::single(v);
        let comb = LinearTermCombination::single(
            ctx.clone(),
            v,
            Term::Apply(x, vec![Term::Var(0)]),
        );
        let sigma = vec![Term::Apply(x, vec![Term::Var(0)])];
        let tau = vec![Term::Apply(x, vec![Term::Apply(x, vec![Term::Var(0)])])];
        let step1 = t.substitute(&comb, &sigma, &ctx).unwrap();
        let step2 = t.substitute(&step1, &tau, &ctx).unwrap();
        let composite: Vec<Term> = sigma
            .iter()
            .map(|s| substitute_term(s, &tau))
            .collect();
        let direct = t.substitute(&comb, &composite, &ctx).unwrap();
        assert_eq!(step2, direct);
    }

    #[test]
    fn cancellation_prunes_zero_coefficients() {
        let t = n2();
        let v = t.sort_by_name("V").unwrap();
        let ctx = Word::single(v);
        let mut comb = LinearTermCombination::zero(ctx, v);
        comb.add_term(Term::Var(0), 3);
        comb.add_term(Term::Var(0), -3);
        assert!(comb.is_zero());
    }
}
