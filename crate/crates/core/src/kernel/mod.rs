//! Line-by-line auditing of Hilbert-style derivations.
//!
//! A derivation is a numbered list of judgments `Γ ⊢ C`, each with a
//! justification that may refer back to earlier lines. The checker only
//! ever looks at one line and the judgments it cites, so a derivation is
//! accepted exactly when every line is locally correct.

mod axioms;
pub mod format;
pub mod ilp;
mod taut;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, IVar, Label};

pub use axioms::{match_axiom, Schema, UnknownSchema};
pub use format::{parse_derivation, print_derivation, FormatError};
pub use ilp::{to_ilp, ToIlpError};
pub use taut::{taut_check, taut_outcome, TautOutcome, MAX_TAUT_ATOMS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Fil,
    /// Label-free reasoning with the axiom `A ⊳ B → □(A ⊳ B)` in place of the P-rule.
    Ilp,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fil => "FIL",
            Mode::Ilp => "ILP",
        })
    }
}

/// `Γ ⊢ C` with `Γ` a multiset, kept sorted so that equal multisets compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Judgment {
    context: Vec<Formula>,
    conclusion: Formula,
}

impl Judgment {
    pub fn new(mut context: Vec<Formula>, conclusion: Formula) -> Self {
        context.sort();
        Judgment { context, conclusion }
    }

    pub fn theorem(conclusion: Formula) -> Self {
        Judgment { context: Vec::new(), conclusion }
    }

    pub fn context(&self) -> &[Formula] {
        &self.context
    }

    pub fn conclusion(&self) -> &Formula {
        &self.conclusion
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.context.iter().chain(std::iter::once(&self.conclusion))
    }

    pub fn erase_labels(&self) -> Judgment {
        Judgment::new(
            self.context.iter().map(Formula::erase_labels).collect(),
            self.conclusion.erase_labels(),
        )
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.context.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{h}")?;
        }
        if !self.context.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    Assume,
    Taut,
    Ax(Schema),
    /// Either premise order is accepted.
    Mp(usize, usize),
    Nec(Label, usize),
    /// From `Δ ⊢ ⋀Γ → C` to `Δ, Γ ⊢ C`.
    DeductionIn(usize),
    /// From `Δ, Γ ⊢ C` to `Δ ⊢ ⋀Γ → C`.
    DeductionOut(usize),
    /// The P-rule: from `Γ, Δ, □^outer(A ⊳^{label,var} B) ⊢ C` to `Γ, A ⊳^label B ⊢ C`.
    PRule {
        label: Label,
        outer: Label,
        var: String,
        premise: usize,
    },
}

impl Justification {
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::Assume | Justification::Taut | Justification::Ax(_) => vec![],
            Justification::Mp(i, j) => vec![*i, *j],
            Justification::Nec(_, i)
            | Justification::DeductionIn(i)
            | Justification::DeductionOut(i)
            | Justification::PRule { premise: i, .. } => vec![*i],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    pub index: usize,
    pub judgment: Judgment,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub mode: Mode,
    pub lines: Vec<Line>,
}

impl Derivation {
    pub fn new(mode: Mode) -> Self {
        Derivation { mode, lines: Vec::new() }
    }

    /// Judgment of the last line.
    pub fn theorem(&self) -> Option<&Judgment> {
        self.lines.last().map(|l| &l.judgment)
    }

    pub fn line(&self, index: usize) -> Option<&Line> {
        self.lines.binary_search_by_key(&index, |l| l.index).ok().map(|pos| &self.lines[pos])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("derivation has no lines")]
    NoLines,
    #[error("index {index} does not exceed the previous index {previous}")]
    NonIncreasingIndex { previous: usize, index: usize },
    #[error("reference to line {0}, which is not an earlier line")]
    BadReference(usize),
    #[error("ill-formed formula {0}")]
    IllFormed(Formula),
    #[error("conclusion is not among the hypotheses")]
    NotAssumption,
    #[error("not a propositional tautology")]
    TautologyFailure,
    #[error("tautology check needs {0} atoms, more than the limit {MAX_TAUT_ATOMS}")]
    TooManyAtoms(usize),
    #[error("not an instance of {0}")]
    SchemaMismatch(Schema),
    #[error("schema {0} is not available in {1} mode")]
    SchemaNotInMode(Schema, Mode),
    #[error("labeled formula {0} in ILP mode")]
    LabelInIlp(Formula),
    #[error("rule is not available in {0} mode")]
    RuleNotInMode(Mode),
    #[error("contexts do not match")]
    ContextMismatch,
    #[error("rule shape: {0}")]
    RuleShape(String),
    #[error("necessitation needs an empty context")]
    NecWithHypotheses,
    #[error("{var} occurs in {location}")]
    FreshnessViolation { var: String, location: String },
    #[error("{0} is not a permitted side hypothesis")]
    DeltaShapeViolation(Formula),
    #[error("`{0}` is not an interpretation variable")]
    NotAVariable(String),
}

impl KernelError {
    /// Variant name, for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            KernelError::NoLines => "NoLines",
            KernelError::NonIncreasingIndex { .. } => "NonIncreasingIndex",
            KernelError::BadReference(_) => "BadReference",
            KernelError::IllFormed(_) => "IllFormed",
            KernelError::NotAssumption => "NotAssumption",
            KernelError::TautologyFailure => "TautologyFailure",
            KernelError::TooManyAtoms(_) => "TooManyAtoms",
            KernelError::SchemaMismatch(_) => "SchemaMismatch",
            KernelError::SchemaNotInMode(..) => "SchemaNotInMode",
            KernelError::LabelInIlp(_) => "LabelInIlp",
            KernelError::RuleNotInMode(_) => "RuleNotInMode",
            KernelError::ContextMismatch => "ContextMismatch",
            KernelError::RuleShape(_) => "RuleShape",
            KernelError::NecWithHypotheses => "NecWithHypotheses",
            KernelError::FreshnessViolation { .. } => "FreshnessViolation",
            KernelError::DeltaShapeViolation(_) => "DeltaShapeViolation",
            KernelError::NotAVariable(_) => "NotAVariable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {}: {error}", line.map_or("-".to_string(), |l| l.to_string()))]
pub struct LineError {
    pub line: Option<usize>,
    pub error: KernelError,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub accepted: bool,
    pub theorem: Option<Judgment>,
    pub errors: Vec<LineError>,
}

/// `big − small` as multisets over sorted vectors, or `None` if `small ⊄ big`.
pub fn multiset_minus(big: &[Formula], small: &[Formula]) -> Option<Vec<Formula>> {
    let mut out = Vec::with_capacity(big.len().saturating_sub(small.len()));
    let mut j = 0;
    for f in big {
        if j < small.len() && small[j] == *f {
            j += 1;
        } else {
            out.push(f.clone());
        }
    }
    // `small` sorted, `big` sorted: any unmatched element means non-inclusion.
    (j == small.len()).then_some(out)
}

fn sorted(mut v: Vec<Formula>) -> Vec<Formula> {
    v.sort();
    v
}

/// Splits `A1 ∧ … ∧ An` (left-nested) into exactly `n` conjuncts; `⋀∅` is `true`.
pub fn split_conjunction(f: &Formula, n: usize) -> Option<Vec<Formula>> {
    if n == 0 {
        return (*f == Formula::Top).then(Vec::new);
    }
    let mut parts = Vec::with_capacity(n);
    let mut cur = f;
    for _ in 1..n {
        match cur {
            Formula::And(a, b) => {
                parts.push((**b).clone());
                cur = a;
            }
            _ => return None,
        }
    }
    parts.push(cur.clone());
    parts.reverse();
    Some(parts)
}

fn conjunction_of(ante: &Formula, moved: &[Formula]) -> bool {
    split_conjunction(ante, moved.len()).is_some_and(|parts| sorted(parts) == moved)
}

/// The pieces of a P-rule application, as recovered by [`p_rule_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PRuleSplit {
    pub gamma: Vec<Formula>,
    pub delta: Vec<Formula>,
    pub antecedent: Formula,
    pub consequent: Formula,
    /// `□^outer(A ⊳^{label,k} B)` as it occurs in the premise.
    pub principal: Formula,
    /// `A ⊳^label B` as it occurs in the conclusion.
    pub discharged: Formula,
}

fn delta_shape_ok(f: &Formula, a: &Label, ak: &Label) -> bool {
    let Some((lhs, rhs)) = f.as_implies() else { return false };
    match (lhs, rhs) {
        (Formula::Rhd(l1, e1, f1), Formula::Rhd(l2, e2, f2)) => l1 == ak && l2 == a && e1 == e2 && f1 == f2,
        (Formula::Box(l1, e1), Formula::Box(l2, e2)) => l1 == a && l2 == ak && e1 == e2,
        _ => false,
    }
}

/// Checks a P-rule step from `premise` to `current` and returns its decomposition.
pub fn p_rule_decompose(
    current: &Judgment,
    premise: &Judgment,
    label: &Label,
    outer: &Label,
    var: &str,
) -> Result<PRuleSplit, KernelError> {
    let k = IVar::new(var).map_err(|_| KernelError::NotAVariable(var.to_string()))?;
    if premise.conclusion != current.conclusion {
        return Err(KernelError::RuleShape("premise and conclusion must prove the same formula".into()));
    }
    let fresh = |location: String| KernelError::FreshnessViolation { var: var.to_string(), location };
    if label.contains(&k) {
        return Err(fresh(format!("label {label}")));
    }
    let ak = label.extend(k.clone()).expect("checked above");
    let mut first_err = None;
    let mut seen = Vec::new();
    for (pos, hyp) in current.context.iter().enumerate() {
        let Formula::Rhd(l, a, b) = hyp else { continue };
        if l != label || seen.contains(&hyp) {
            continue;
        }
        seen.push(hyp);
        let attempt = (|| {
            let principal =
                Formula::boxed(outer.clone(), Formula::rhd(ak.clone(), (**a).clone(), (**b).clone()));
            let mut gamma = current.context.clone();
            gamma.remove(pos);
            let rest = multiset_minus(&premise.context, std::slice::from_ref(&principal))
                .ok_or(KernelError::ContextMismatch)?;
            let delta = multiset_minus(&rest, &gamma).ok_or(KernelError::ContextMismatch)?;
            for g in &gamma {
                if g.mentions_ivar(&k) {
                    return Err(fresh(format!("hypothesis {g}")));
                }
            }
            if a.mentions_ivar(&k) {
                return Err(fresh(format!("antecedent {a}")));
            }
            if b.mentions_ivar(&k) {
                return Err(fresh(format!("consequent {b}")));
            }
            if current.conclusion.mentions_ivar(&k) {
                return Err(fresh(format!("conclusion {}", current.conclusion)));
            }
            if let Some(bad) = delta.iter().find(|d| !delta_shape_ok(d, label, &ak)) {
                return Err(KernelError::DeltaShapeViolation(bad.clone()));
            }
            Ok(PRuleSplit {
                gamma,
                delta,
                antecedent: (**a).clone(),
                consequent: (**b).clone(),
                principal,
                discharged: hyp.clone(),
            })
        })();
        match attempt {
            Ok(split) => return Ok(split),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or_else(|| {
        KernelError::RuleShape(format!("no hypothesis of the form A |>{label} B to discharge"))
    }))
}

fn premise_of<'a>(
    d: &'a Derivation,
    positions: &HashMap<usize, usize>,
    here: usize,
    i: usize,
) -> Result<&'a Judgment, KernelError> {
    match positions.get(&i) {
        Some(&pos) if i < here => Ok(&d.lines[pos].judgment),
        _ => Err(KernelError::BadReference(i)),
    }
}

fn check_mode(mode: Mode, line: &Line) -> Result<(), KernelError> {
    for f in line.judgment.formulas() {
        if !f.is_well_formed() {
            return Err(KernelError::IllFormed(f.clone()));
        }
    }
    match mode {
        Mode::Fil => match line.justification {
            Justification::Ax(Schema::P) => Err(KernelError::SchemaNotInMode(Schema::P, mode)),
            _ => Ok(()),
        },
        Mode::Ilp => {
            if let Some(f) = line.judgment.formulas().find(|f| !f.is_label_free()) {
                return Err(KernelError::LabelInIlp(f.clone()));
            }
            match &line.justification {
                Justification::Ax(s @ (Schema::BoxDrop | Schema::RhdExtend)) => {
                    Err(KernelError::SchemaNotInMode(*s, mode))
                }
                Justification::PRule { .. } => Err(KernelError::RuleNotInMode(mode)),
                Justification::Nec(l, _) if !l.is_empty() => Err(KernelError::RuleNotInMode(mode)),
                _ => Ok(()),
            }
        }
    }
}

fn check_at(d: &Derivation, positions: &HashMap<usize, usize>, pos: usize) -> Result<(), KernelError> {
    let line = &d.lines[pos];
    check_mode(d.mode, line)?;
    let here = line.index;
    let cur = &line.judgment;
    let get = |i: usize| premise_of(d, positions, here, i);
    match &line.justification {
        Justification::Assume => {
            if cur.context.contains(&cur.conclusion) {
                Ok(())
            } else {
                Err(KernelError::NotAssumption)
            }
        }
        Justification::Taut => match taut_outcome(&cur.conclusion) {
            TautOutcome::Valid => Ok(()),
            TautOutcome::Invalid => Err(KernelError::TautologyFailure),
            TautOutcome::TooManyAtoms(n) => Err(KernelError::TooManyAtoms(n)),
        },
        Justification::Ax(schema) => {
            if match_axiom(*schema, &cur.conclusion) {
                Ok(())
            } else {
                Err(KernelError::SchemaMismatch(*schema))
            }
        }
        Justification::Mp(i, j) => {
            let (p, q) = (get(*i)?, get(*j)?);
            if p.context != cur.context || q.context != cur.context {
                return Err(KernelError::ContextMismatch);
            }
            let fits = |minor: &Judgment, major: &Judgment| {
                matches!(major.conclusion.as_implies(),
                    Some((a, b)) if *a == minor.conclusion && *b == cur.conclusion)
            };
            if fits(p, q) || fits(q, p) {
                Ok(())
            } else {
                Err(KernelError::RuleShape("premises are not A and A -> B".into()))
            }
        }
        Justification::Nec(label, i) => {
            let p = get(*i)?;
            if !p.context.is_empty() || !cur.context.is_empty() {
                return Err(KernelError::NecWithHypotheses);
            }
            if cur.conclusion == Formula::boxed(label.clone(), p.conclusion.clone()) {
                Ok(())
            } else {
                Err(KernelError::RuleShape(format!("conclusion is not #{label} of the premise")))
            }
        }
        Justification::DeductionOut(i) => {
            let p = get(*i)?;
            let moved = multiset_minus(&p.context, &cur.context).ok_or(KernelError::ContextMismatch)?;
            let (ante, concl) = cur
                .conclusion
                .as_implies()
                .ok_or_else(|| KernelError::RuleShape("conclusion is not an implication".into()))?;
            if *concl != p.conclusion {
                return Err(KernelError::RuleShape("consequent differs from premise".into()));
            }
            if conjunction_of(ante, &moved) {
                Ok(())
            } else {
                Err(KernelError::RuleShape(
                    "antecedent is not the conjunction of the discharged hypotheses".into(),
                ))
            }
        }
        Justification::DeductionIn(i) => {
            let p = get(*i)?;
            let moved = multiset_minus(&cur.context, &p.context).ok_or(KernelError::ContextMismatch)?;
            let (ante, concl) = p
                .conclusion
                .as_implies()
                .ok_or_else(|| KernelError::RuleShape("premise is not an implication".into()))?;
            if *concl != cur.conclusion {
                return Err(KernelError::RuleShape("conclusion differs from premise consequent".into()));
            }
            if conjunction_of(ante, &moved) {
                Ok(())
            } else {
                Err(KernelError::RuleShape("antecedent is not the conjunction of the new hypotheses".into()))
            }
        }
        Justification::PRule { label, outer, var, premise } => {
            let p = get(*premise)?;
            p_rule_decompose(cur, p, label, outer, var).map(|_| ())
        }
    }
}

/// Checks the line with the given index, assuming the lines it cites are as claimed.
pub fn check_line(d: &Derivation, index: usize) -> Result<(), KernelError> {
    let positions = positions(d);
    let pos = *positions.get(&index).ok_or(KernelError::BadReference(index))?;
    check_at(d, &positions, pos)
}

fn positions(d: &Derivation) -> HashMap<usize, usize> {
    d.lines.iter().enumerate().map(|(p, l)| (l.index, p)).collect()
}

/// Checks every line; the theorem is the judgment of the last line.
pub fn check(d: &Derivation) -> CheckReport {
    let mut errors = Vec::new();
    if d.lines.is_empty() {
        errors.push(LineError { line: None, error: KernelError::NoLines });
        return CheckReport { accepted: false, theorem: None, errors };
    }
    for w in d.lines.windows(2) {
        if w[1].index <= w[0].index {
            errors.push(LineError {
                line: Some(w[1].index),
                error: KernelError::NonIncreasingIndex { previous: w[0].index, index: w[1].index },
            });
        }
    }
    let positions = positions(d);
    for pos in 0..d.lines.len() {
        if let Err(error) = check_at(d, &positions, pos) {
            errors.push(LineError { line: Some(d.lines[pos].index), error });
        }
    }
    errors.sort_by_key(|e| e.line);
    CheckReport { accepted: errors.is_empty(), theorem: d.theorem().cloned(), errors }
}
