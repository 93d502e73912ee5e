use std::collections::{BTreeSet, HashMap};

use crate::formula::{Formula, IVar, Label};
use crate::kernel::{
    check, match_axiom, multiset_minus, split_conjunction, taut_check, Derivation, Judgment, Justification,
    Line, Mode, Schema,
};

use super::SynthError;

/// Deterministic supply of interpretation variables `k0, k1, …`.
#[derive(Clone, Debug, Default)]
pub struct FreshSupply {
    counter: usize,
    used: BTreeSet<String>,
}

impl FreshSupply {
    pub fn new() -> Self {
        Self::default()
    }

    /// A supply that never emits any of `taken`.
    pub fn avoiding<I: IntoIterator<Item = String>>(taken: I) -> Self {
        FreshSupply { counter: 0, used: taken.into_iter().collect() }
    }

    pub fn next_var(&mut self) -> IVar {
        loop {
            let name = format!("k{}", self.counter);
            self.counter += 1;
            if self.used.insert(name.clone()) {
                return IVar::new(name).expect("generated names are identifiers");
            }
        }
    }

    pub fn emitted(&self) -> usize {
        self.counter
    }
}

pub(crate) fn e() -> Label {
    Label::empty()
}

pub(crate) fn one(k: &IVar) -> Label {
    Label::empty().extend(k.clone()).expect("single variable")
}

pub(crate) fn ext(l: &Label, k: &IVar) -> Label {
    l.extend(k.clone()).expect("fresh variable")
}

pub(crate) fn rhd(l: &Label, a: &Formula, b: &Formula) -> Formula {
    Formula::rhd(l.clone(), a.clone(), b.clone())
}

pub(crate) fn bx(l: &Label, a: &Formula) -> Formula {
    Formula::boxed(l.clone(), a.clone())
}

pub(crate) fn dia(l: &Label, a: &Formula) -> Formula {
    Formula::diamond(l.clone(), a.clone())
}

pub(crate) fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

pub(crate) fn and(a: &Formula, b: &Formula) -> Formula {
    Formula::and(a.clone(), b.clone())
}

pub(crate) fn not(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

fn sorted(v: &[Formula]) -> Vec<Formula> {
    let mut v = v.to_vec();
    v.sort();
    v
}

/// Emits kernel lines one at a time. Identical judgments are proved once
/// and shared.
#[derive(Default)]
pub struct ProofBuilder {
    lines: Vec<Line>,
    cache: HashMap<Judgment, usize>,
    fresh: FreshSupply,
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_supply(fresh: FreshSupply) -> Self {
        ProofBuilder { fresh, ..Self::default() }
    }

    pub fn fresh(&mut self) -> IVar {
        self.fresh.next_var()
    }

    pub fn judgment(&self, i: usize) -> &Judgment {
        &self.lines[i - 1].judgment
    }

    pub fn conclusion(&self, i: usize) -> Formula {
        self.judgment(i).conclusion().clone()
    }

    pub fn context(&self, i: usize) -> Vec<Formula> {
        self.judgment(i).context().to_vec()
    }

    fn push(&mut self, ctx: Vec<Formula>, conclusion: Formula, justification: Justification) -> usize {
        let judgment = Judgment::new(ctx, conclusion);
        if let Some(&i) = self.cache.get(&judgment) {
            return i;
        }
        let index = self.lines.len() + 1;
        self.cache.insert(judgment.clone(), index);
        self.lines.push(Line { index, judgment, justification });
        index
    }

    pub fn assume(&mut self, ctx: &[Formula], f: &Formula) -> usize {
        assert!(ctx.contains(f), "assumption {f} not in context");
        self.push(ctx.to_vec(), f.clone(), Justification::Assume)
    }

    pub fn taut(&mut self, ctx: &[Formula], f: Formula) -> usize {
        debug_assert!(taut_check(&f), "not a tautology: {f}");
        self.push(ctx.to_vec(), f, Justification::Taut)
    }

    pub fn ax(&mut self, ctx: &[Formula], schema: Schema, f: Formula) -> usize {
        debug_assert!(match_axiom(schema, &f), "not an instance of {schema}: {f}");
        self.push(ctx.to_vec(), f, Justification::Ax(schema))
    }

    pub fn mp(&mut self, minor: usize, major: usize) -> usize {
        let big = self.conclusion(major);
        let (a, b) = big.as_implies().expect("major premise is an implication");
        assert_eq!(*a, self.conclusion(minor), "modus ponens mismatch");
        assert_eq!(self.context(minor), self.context(major), "modus ponens contexts");
        self.push(self.context(minor), b.clone(), Justification::Mp(minor, major))
    }

    pub fn nec(&mut self, label: &Label, i: usize) -> usize {
        assert!(self.context(i).is_empty(), "necessitation of a non-theorem");
        let f = bx(label, &self.conclusion(i));
        self.push(Vec::new(), f, Justification::Nec(label.clone(), i))
    }

    /// Moves `moved` (in this order) from the context into a conjunctive antecedent.
    pub fn ded_out(&mut self, i: usize, moved: &[Formula]) -> usize {
        let ctx = multiset_minus(&self.context(i), &sorted(moved)).expect("hypotheses present");
        let f = imp(&Formula::and_all(moved.to_vec()), &self.conclusion(i));
        self.push(ctx, f, Justification::DeductionOut(i))
    }

    /// Moves the `n` conjuncts of the antecedent into the context.
    pub fn ded_in(&mut self, i: usize, n: usize) -> usize {
        let c = self.conclusion(i);
        let (ante, concl) = c.as_implies().expect("implication");
        let mut ctx = self.context(i);
        ctx.extend(split_conjunction(ante, n).expect("conjunction of n parts"));
        self.push(ctx, concl.clone(), Justification::DeductionIn(i))
    }

    /// Applies the P-rule to `principal = □^outer(A ⊳^{label,k} B)`, with side hypotheses `delta`.
    pub fn p_rule(&mut self, i: usize, principal: &Formula, delta: &[Formula]) -> usize {
        let Formula::Box(outer, inner) = principal else { panic!("principal is boxed") };
        let Formula::Rhd(lk, a, b) = &**inner else { panic!("principal is a box of rhd") };
        let (label, k) = lk.split_last().expect("label ends in the fresh variable");
        let mut removed = delta.to_vec();
        removed.push(principal.clone());
        let mut ctx = multiset_minus(&self.context(i), &sorted(&removed)).expect("principal present");
        ctx.push(rhd(&label, a, b));
        let just =
            Justification::PRule { label, outer: outer.clone(), var: k.name().to_string(), premise: i };
        self.push(ctx, self.conclusion(i), just)
    }

    /// From `Γ ⊢ P_i`, proves `Γ ⊢ goal` provided `P_1 → … → P_n → goal` is a tautology.
    pub fn by_taut(&mut self, ctx: &[Formula], premises: &[usize], goal: Formula) -> usize {
        let ps: Vec<Formula> = premises.iter().map(|&p| self.conclusion(p)).collect();
        let mut cur = self.taut(ctx, Formula::implies_chain(ps, goal));
        for &p in premises {
            cur = self.mp(p, cur);
        }
        cur
    }

    /// Carries a theorem into the context `ctx`.
    pub fn weaken(&mut self, i: usize, ctx: &[Formula]) -> usize {
        if ctx.is_empty() || self.context(i) == sorted(ctx) {
            return i;
        }
        assert!(self.context(i).is_empty(), "only theorems are weakened");
        let f = self.conclusion(i);
        let t = self.taut(&[], imp(&f, &imp(&Formula::and_all(ctx.to_vec()), &f)));
        let m = self.mp(i, t);
        self.ded_in(m, ctx.len())
    }

    /// `⊢ P → Q` gives `⊢ □^l P → □^l Q`.
    pub fn imp_lift(&mut self, label: &Label, thm: usize) -> usize {
        let body = self.conclusion(thm);
        let (p, q) = body.as_implies().expect("implication");
        let n = self.nec(label, thm);
        let l1 = self.ax(&[], Schema::L1, imp(&bx(label, &body), &imp(&bx(label, p), &bx(label, q))));
        self.mp(n, l1)
    }

    /// From `⊢ P_1 → … → P_n → Q` and `Γ ⊢ □^l P_i`, proves `Γ ⊢ □^l Q`.
    pub fn box_lift(&mut self, ctx: &[Formula], label: &Label, thm: usize, boxed: &[usize]) -> usize {
        let n = self.nec(label, thm);
        let mut cur = self.weaken(n, ctx);
        for &p in boxed {
            let Formula::Box(_, body) = self.conclusion(cur) else { unreachable!() };
            let (a, b) = body.as_implies().expect("implication under the box");
            let l1 = self.ax(ctx, Schema::L1, imp(&bx(label, &body), &imp(&bx(label, a), &bx(label, b))));
            let m = self.mp(cur, l1);
            cur = self.mp(p, m);
        }
        cur
    }

    /// Reasons propositionally under `□^l`: from `Γ ⊢ □^l P_i` proves `Γ ⊢ □^l goal`.
    pub fn box_taut(&mut self, ctx: &[Formula], label: &Label, boxed: &[usize], goal: Formula) -> usize {
        let ps: Vec<Formula> = boxed
            .iter()
            .map(|&p| match self.conclusion(p) {
                Formula::Box(l, body) if l == *label => *body,
                other => panic!("expected #{label} formula, got {other}"),
            })
            .collect();
        let thm = self.taut(&[], Formula::implies_chain(ps, goal));
        self.box_lift(ctx, label, thm, boxed)
    }

    /// `Γ ⊢ □^l(A → B)` gives `Γ ⊢ A ⊳^l B`.
    pub fn j1(&mut self, ctx: &[Formula], i: usize) -> usize {
        let Formula::Box(l, body) = self.conclusion(i) else { panic!("boxed premise") };
        let (a, b) = body.as_implies().expect("implication");
        let ax = self.ax(ctx, Schema::J1, imp(&bx(&l, &body), &rhd(&l, a, b)));
        self.mp(i, ax)
    }

    /// `Γ ⊢ A ⊳ B` and `Γ ⊢ B ⊳^l C` give `Γ ⊢ A ⊳^l C`.
    pub fn j2a(&mut self, ctx: &[Formula], i: usize, j: usize) -> usize {
        let (Formula::Rhd(_, a, _), Formula::Rhd(l, _, c)) = (self.conclusion(i), self.conclusion(j)) else {
            panic!("rhd premises")
        };
        let goal = rhd(&l, &a, &c);
        let ax = self.ax(ctx, Schema::J2a, imp(&and(&self.conclusion(i), &self.conclusion(j)), &goal));
        self.by_taut(ctx, &[i, j, ax], goal)
    }

    /// `Γ ⊢ A ⊳^l B` and `Γ ⊢ □^l(B → C)` give `Γ ⊢ A ⊳^l C`.
    pub fn j2b(&mut self, ctx: &[Formula], i: usize, j: usize) -> usize {
        let Formula::Rhd(l, a, _) = self.conclusion(i) else { panic!("rhd premise") };
        let Formula::Box(_, body) = self.conclusion(j) else { panic!("boxed premise") };
        let (_, c) = body.as_implies().expect("implication");
        let goal = rhd(&l, &a, c);
        let ax = self.ax(ctx, Schema::J2b, imp(&and(&self.conclusion(i), &self.conclusion(j)), &goal));
        self.by_taut(ctx, &[i, j, ax], goal)
    }

    /// `Γ ⊢ A ⊳^l C` and `Γ ⊢ B ⊳^l C` give `Γ ⊢ A ∨ B ⊳^l C`.
    pub fn j3(&mut self, ctx: &[Formula], i: usize, j: usize) -> usize {
        let (Formula::Rhd(l, a, c), Formula::Rhd(_, b, _)) = (self.conclusion(i), self.conclusion(j)) else {
            panic!("rhd premises")
        };
        let goal = rhd(&l, &Formula::or((*a).clone(), (*b).clone()), &c);
        let ax = self.ax(ctx, Schema::J3, imp(&and(&self.conclusion(i), &self.conclusion(j)), &goal));
        self.by_taut(ctx, &[i, j, ax], goal)
    }

    /// `Γ ⊢ A ⊳^l ◇^m B` gives `Γ ⊢ A ⊳^m B`.
    pub fn j5(&mut self, ctx: &[Formula], i: usize) -> usize {
        let f = self.conclusion(i);
        let Formula::Rhd(_, a, db) = &f else { panic!("rhd premise") };
        let (m, b) = db.as_diamond().expect("diamond consequent");
        let goal = rhd(m, a, b);
        let ax = self.ax(ctx, Schema::J5, imp(&f, &goal));
        self.mp(i, ax)
    }

    /// `Γ ⊢ A ⊳^l B` and `⊢ B → C` give `Γ ⊢ A ⊳^l C`.
    pub fn rhd_post(&mut self, ctx: &[Formula], i: usize, thm: usize) -> usize {
        let Formula::Rhd(l, _, _) = self.conclusion(i) else { panic!("rhd premise") };
        let n = self.nec(&l, thm);
        let w = self.weaken(n, ctx);
        self.j2b(ctx, i, w)
    }

    /// `⊢ A → B` and `Γ ⊢ B ⊳^l C` give `Γ ⊢ A ⊳^l C`.
    pub fn rhd_pre(&mut self, ctx: &[Formula], thm: usize, j: usize) -> usize {
        let n = self.nec(&e(), thm);
        let w = self.weaken(n, ctx);
        let first = self.j1(ctx, w);
        self.j2a(ctx, first, j)
    }

    /// From `Γ, δ ⊢ L ⊳^{l,k} R` with `δ = L ⊳^{l,k} R → L ⊳^l R` among the
    /// hypotheses, applies the P-rule to `principal` and returns `Γ', A ⊳^l B ⊢ L ⊳^l R`.
    pub fn discharge_with_ext(&mut self, i: usize, principal: &Formula) -> usize {
        let f = self.conclusion(i);
        let Formula::Rhd(lk, l, r) = &f else { panic!("rhd line") };
        let (la, _) = lk.split_last().expect("extended label");
        let delta = imp(&f, &rhd(&la, l, r));
        let ctx = self.context(i);
        let d = self.assume(&ctx, &delta);
        let m = self.mp(i, d);
        self.p_rule(m, principal, &[delta])
    }

    /// Copies a derivation's lines in; returns the new index of its last line.
    pub fn import(&mut self, d: &Derivation) -> usize {
        let mut map = HashMap::new();
        let mut last = 0;
        for line in &d.lines {
            let m = |i: &usize| map[i];
            let just = match &line.justification {
                Justification::Mp(i, j) => Justification::Mp(m(i), m(j)),
                Justification::Nec(l, i) => Justification::Nec(l.clone(), m(i)),
                Justification::DeductionIn(i) => Justification::DeductionIn(m(i)),
                Justification::DeductionOut(i) => Justification::DeductionOut(m(i)),
                Justification::PRule { label, outer, var, premise } => Justification::PRule {
                    label: label.clone(),
                    outer: outer.clone(),
                    var: var.clone(),
                    premise: m(premise),
                },
                other => other.clone(),
            };
            last = self.push(line.judgment.context().to_vec(), line.judgment.conclusion().clone(), just);
            map.insert(line.index, last);
        }
        last
    }

    /// Keeps the lines `target` depends on, renumbers them, and audits the result.
    pub fn finish(self, target: usize) -> Result<Derivation, SynthError> {
        let mut needed = vec![false; self.lines.len() + 1];
        needed[target] = true;
        for i in (1..=target).rev() {
            if needed[i] {
                for p in self.lines[i - 1].justification.premises() {
                    needed[p] = true;
                }
            }
        }
        let mut renumber = HashMap::new();
        let mut out = Derivation::new(Mode::Fil);
        for line in self.lines.into_iter().take(target) {
            if !needed[line.index] {
                continue;
            }
            let index = out.lines.len() + 1;
            renumber.insert(line.index, index);
            let m = |i: &usize| renumber[i];
            let justification = match line.justification {
                Justification::Mp(i, j) => Justification::Mp(m(&i), m(&j)),
                Justification::Nec(l, i) => Justification::Nec(l, m(&i)),
                Justification::DeductionIn(i) => Justification::DeductionIn(m(&i)),
                Justification::DeductionOut(i) => Justification::DeductionOut(m(&i)),
                Justification::PRule { label, outer, var, premise } => {
                    Justification::PRule { label, outer, var, premise: m(&premise) }
                }
                other => other,
            };
            out.lines.push(Line { index, judgment: line.judgment, justification });
        }
        let report = check(&out);
        if report.accepted {
            Ok(out)
        } else {
            Err(SynthError::Rejected(report.errors))
        }
    }
}
