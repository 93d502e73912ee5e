//! Formulas of the labeled interpretability language.
//!
//! Both modalities carry a [`Label`], a finite sequence of distinct
//! interpretation variables. The unlabeled `□` and `⊳` are the empty label.
//! `◇^a A` is not a constructor of its own; it is stored as `¬□^a¬A`.

mod parse;
mod print;
#[cfg(test)]
pub(crate) mod strategy;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use parse::{parse, parse_formula_list, parse_label, ParseError, ParseErrorKind};

/// An interpretation variable such as `k`, `k0`, `j1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IVar(String);

impl IVar {
    /// Builds a variable; rejects empty names and the reserved constant `id`.
    pub fn new(name: impl Into<String>) -> Result<Self, LabelError> {
        let name = name.into();
        if !is_ident(&name) {
            return Err(LabelError::BadName(name));
        }
        if name == "id" {
            return Err(LabelError::IdNotVariable);
        }
        Ok(IVar(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for IVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An interpretation term as it may be written in source text.
///
/// `Id` is accepted by the parser and normalized away: `□^id` is `□^[]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum InterpTerm {
    Var(IVar),
    Id,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("duplicate term {0} in label")]
    Duplicate(String),
    #[error("`id` may only appear alone in a label")]
    IdInSequence,
    #[error("`id` is a constant, not an interpretation variable")]
    IdNotVariable,
    #[error("invalid interpretation variable name `{0}`")]
    BadName(String),
}

/// A sequence of pairwise distinct interpretation variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Vec<IVar>);

impl Label {
    pub fn empty() -> Self {
        Label(Vec::new())
    }

    /// Normalizes a written sequence of terms into a label.
    pub fn from_terms(terms: Vec<InterpTerm>) -> Result<Self, LabelError> {
        if terms.len() == 1 && terms[0] == InterpTerm::Id {
            return Ok(Label::empty());
        }
        let mut label = Label::empty();
        for t in terms {
            match t {
                InterpTerm::Id => return Err(LabelError::IdInSequence),
                InterpTerm::Var(v) => label = label.extend(v)?,
            }
        }
        Ok(label)
    }

    pub fn from_vars<I, S>(vars: I) -> Result<Self, LabelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut label = Label::empty();
        for v in vars {
            label = label.extend(IVar::new(v)?)?;
        }
        Ok(label)
    }

    /// `self, k`; fails if `k` already occurs.
    pub fn extend(&self, k: IVar) -> Result<Self, LabelError> {
        if self.contains(&k) {
            return Err(LabelError::Duplicate(k.0));
        }
        let mut v = self.0.clone();
        v.push(k);
        Ok(Label(v))
    }

    pub fn contains(&self, k: &IVar) -> bool {
        self.0.contains(k)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[IVar] {
        &self.0
    }

    /// Splits `a, k` into `(a, k)`.
    pub fn split_last(&self) -> Option<(Label, &IVar)> {
        let (last, init) = self.0.split_last()?;
        Some((Label(init.to_vec()), last))
    }

    fn is_valid(&self) -> bool {
        self.0.iter().enumerate().all(|(i, v)| v.0 != "id" && !self.0[..i].contains(v))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&v.0)?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Label, Box<Formula>),
    Rhd(Label, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(label: Label, a: Formula) -> Self {
        Formula::Box(label, Box::new(a))
    }

    pub fn rhd(label: Label, a: Formula, b: Formula) -> Self {
        Formula::Rhd(label, Box::new(a), Box::new(b))
    }

    /// `◇^a A`, stored as `¬□^a¬A`.
    pub fn diamond(label: Label, a: Formula) -> Self {
        Formula::not(Formula::boxed(label, Formula::not(a)))
    }

    /// Left-nested conjunction; `true` for an empty sequence.
    pub fn and_all<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Top,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-nested disjunction; `false` for an empty sequence.
    pub fn or_all<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Bot,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// `A1 -> (A2 -> ... -> C)`.
    pub fn implies_chain<I>(premises: I, conclusion: Formula) -> Self
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        premises.into_iter().rev().fold(conclusion, |acc, p| Formula::implies(p, acc))
    }

    /// If `self` is `◇^a A`, returns `(a, A)`.
    pub fn as_diamond(&self) -> Option<(&Label, &Formula)> {
        match self {
            Formula::Not(inner) => match &**inner {
                Formula::Box(l, body) => match &**body {
                    Formula::Not(a) => Some((l, a)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_implies(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Implies(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => 1,
            Formula::Not(a) | Formula::Box(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Rhd(_, a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Nesting depth of `□` and `⊳`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => 0,
            Formula::Not(a) => a.modal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
            Formula::Box(_, a) => 1 + a.modal_depth(),
            Formula::Rhd(_, a, b) => 1 + a.modal_depth().max(b.modal_depth()),
        }
    }

    /// Names of the propositional variables.
    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| {
            if let Formula::Var(p) = g {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Names of all interpretation variables occurring in some label.
    pub fn interp_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| match g {
            Formula::Box(l, _) | Formula::Rhd(l, _, _) => out.extend(l.vars().iter().map(|v| v.0.clone())),
            _ => {}
        });
        out
    }

    pub fn mentions_ivar(&self, k: &IVar) -> bool {
        let mut found = false;
        self.visit(&mut |g| match g {
            Formula::Box(l, _) | Formula::Rhd(l, _, _) if l.contains(k) => found = true,
            _ => {}
        });
        found
    }

    pub fn is_label_free(&self) -> bool {
        let mut free = true;
        self.visit(&mut |g| match g {
            Formula::Box(l, _) | Formula::Rhd(l, _, _) if !l.is_empty() => free = false,
            _ => {}
        });
        free
    }

    pub fn is_well_formed(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |g| match g {
            Formula::Box(l, _) | Formula::Rhd(l, _, _) if !l.is_valid() => ok = false,
            Formula::Var(p) if !is_ident(p) || is_keyword(p) => ok = false,
            _ => {}
        });
        ok
    }

    /// Replaces every label by the empty label.
    pub fn erase_labels(&self) -> Formula {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => self.clone(),
            Formula::Not(a) => Formula::not(a.erase_labels()),
            Formula::And(a, b) => Formula::and(a.erase_labels(), b.erase_labels()),
            Formula::Or(a, b) => Formula::or(a.erase_labels(), b.erase_labels()),
            Formula::Implies(a, b) => Formula::implies(a.erase_labels(), b.erase_labels()),
            Formula::Box(_, a) => Formula::boxed(Label::empty(), a.erase_labels()),
            Formula::Rhd(_, a, b) => Formula::rhd(Label::empty(), a.erase_labels(), b.erase_labels()),
        }
    }

    /// Simultaneously replaces every occurrence of `pattern` by `replacement`.
    pub fn replace_subformula(&self, pattern: &Formula, replacement: &Formula) -> Formula {
        self.replace_all(&[(pattern.clone(), replacement.clone())])
    }

    /// Simultaneous substitution of several subformulas. Outermost matches
    /// win; replacements are not rewritten again.
    pub fn replace_all(&self, subst: &[(Formula, Formula)]) -> Formula {
        if let Some((_, rep)) = subst.iter().find(|(pat, _)| pat == self) {
            return rep.clone();
        }
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => self.clone(),
            Formula::Not(a) => Formula::not(a.replace_all(subst)),
            Formula::And(a, b) => Formula::and(a.replace_all(subst), b.replace_all(subst)),
            Formula::Or(a, b) => Formula::or(a.replace_all(subst), b.replace_all(subst)),
            Formula::Implies(a, b) => Formula::implies(a.replace_all(subst), b.replace_all(subst)),
            Formula::Box(l, a) => Formula::boxed(l.clone(), a.replace_all(subst)),
            Formula::Rhd(l, a, b) => Formula::rhd(l.clone(), a.replace_all(subst), b.replace_all(subst)),
        }
    }

    /// True if `sub` occurs as a subformula (including `self`).
    pub fn contains_subformula(&self, sub: &Formula) -> bool {
        let mut found = false;
        self.visit(&mut |g| {
            if g == sub {
                found = true;
            }
        });
        found
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => {}
            Formula::Not(a) | Formula::Box(_, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Rhd(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Canonical text of a formula; `parse(&print(f)) == f`.
pub fn print(f: &Formula) -> String {
    print::print(f)
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn is_keyword(s: &str) -> bool {
    matches!(s, "true" | "false")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn label_rejects_duplicates() {
        let k = IVar::new("k").unwrap();
        let l = Label::empty().extend(k.clone()).unwrap();
        assert_eq!(l.extend(k), Err(LabelError::Duplicate("k".into())));
        assert!(IVar::new("id").is_err());
    }

    #[test]
    fn id_normalizes_to_empty() {
        assert_eq!(p("#[id] p"), p("# p"));
        assert_eq!(p("a |>[id] b"), p("a |> b"));
        assert!(parse("#[k,id] p").is_err());
    }

    #[test]
    fn erase_labels_examples() {
        assert_eq!(p("#[k] p").erase_labels(), p("# p"));
        assert_eq!(p("a |>[k,j] b").erase_labels(), p("a |> b"));
        let f = p("a |>[k] <>[j] b -> #[k,j] c");
        let e = f.erase_labels();
        assert_eq!(e.erase_labels(), e);
        assert!(e.interp_vars().is_empty());
    }

    #[test]
    fn interp_vars_examples() {
        assert_eq!(p("#[k] p").interp_vars(), ["k".to_string()].into_iter().collect());
        assert!(p("p & q").interp_vars().is_empty());
        assert_eq!(p("a |>[k,j] #[l] b").interp_vars().len(), 3);
    }

    #[test]
    fn replace_subformula_examples() {
        let r0 = p("a0 |> b0 -> ~(a0 |> ~c0) |> b0 & # c0");
        let b0 = p("b0");
        let rep = p("b0 & (a1 |> b1)");
        let out = r0.replace_subformula(&b0, &rep);
        assert!(out.contains_subformula(&p("(a0 |> b0 & (a1 |> b1))")));
        assert_eq!(out, p("a0 |> b0 & (a1 |> b1) -> ~(a0 |> ~c0) |> (b0 & (a1 |> b1)) & # c0"));

        assert_eq!(r0.replace_subformula(&p("zz"), &p("q")), r0);
        assert_eq!(r0.replace_subformula(&b0, &b0), r0);
    }

    #[test]
    fn replacement_is_simultaneous() {
        let f = p("p & q");
        let out = f.replace_all(&[(p("p"), p("q")), (p("q"), p("p"))]);
        assert_eq!(out, p("q & p"));
    }

    proptest::proptest! {
        #[test]
        fn print_parse_round_trip(f in strategy::formula(6, 4)) {
            let text = print(&f);
            proptest::prop_assert_eq!(parse(&text).unwrap(), f);
        }

        #[test]
        fn erasure_is_idempotent_and_label_free(f in strategy::formula(6, 3)) {
            let e = f.erase_labels();
            proptest::prop_assert!(e.interp_vars().is_empty());
            proptest::prop_assert_eq!(e.erase_labels(), e.clone());
            proptest::prop_assert!(e.is_label_free());
        }

        #[test]
        fn erasure_fixes_label_free(f in strategy::formula(6, 3)) {
            let e = f.erase_labels();
            // every label-free formula is its own image
            proptest::prop_assert_eq!(e.erase_labels(), e);
        }

        #[test]
        fn replacement_keeps_well_formedness(
            f in strategy::formula(5, 3),
            g in strategy::formula(3, 3),
        ) {
            let out = f.replace_subformula(&Formula::var("p"), &g);
            proptest::prop_assert!(out.is_well_formed());
            proptest::prop_assert!(!out.contains_subformula(&Formula::var("p")) || g.contains_subformula(&Formula::var("p")));
        }
    }

    #[test]
    fn diamond_is_sugar() {
        let d = p("<>[k] p");
        assert_eq!(d, p("~#[k] ~p"));
        let (l, body) = d.as_diamond().unwrap();
        assert_eq!(l, &Label::from_vars(["k"]).unwrap());
        assert_eq!(body, &p("p"));
    }
}
