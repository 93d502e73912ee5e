//! Erasure of FIL derivations into label-free ILP derivations.
//!
//! Every formula loses its labels. Steps that become trivial under erasure
//! (`BoxDrop`, `RhdExtend`) turn into tautologies, and each P-rule step is
//! replaced by an appeal to the axiom `A ⊳ B → □(A ⊳ B)`.

use std::collections::HashMap;

use thiserror::Error;

use super::{check, p_rule_decompose, Derivation, Judgment, Justification, Line, LineError, Mode, Schema};
use crate::formula::{Formula, Label};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ToIlpError {
    #[error("input is not an ILP-convertible FIL derivation")]
    WrongMode,
    #[error("input is not FIL-accepted: {}", .0.first().map(|e| e.to_string()).unwrap_or_default())]
    NotAccepted(Vec<LineError>),
}

struct Emitter {
    out: Derivation,
}

impl Emitter {
    fn push(&mut self, context: &[Formula], conclusion: Formula, justification: Justification) -> usize {
        let index = self.out.lines.len() + 1;
        self.out.lines.push(Line {
            index,
            judgment: Judgment::new(context.to_vec(), conclusion),
            justification,
        });
        index
    }
}

fn erase_all(fs: &[Formula]) -> Vec<Formula> {
    fs.iter().map(Formula::erase_labels).collect()
}

/// Translates an accepted FIL derivation into an ILP derivation of the erased theorem.
pub fn to_ilp(d: &Derivation) -> Result<Derivation, ToIlpError> {
    if d.mode != Mode::Fil {
        return Err(ToIlpError::WrongMode);
    }
    let report = check(d);
    if !report.accepted {
        return Err(ToIlpError::NotAccepted(report.errors));
    }
    let mut em = Emitter { out: Derivation::new(Mode::Ilp) };
    let mut map: HashMap<usize, usize> = HashMap::new();
    for line in &d.lines {
        let j = line.judgment.erase_labels();
        let ctx = j.context().to_vec();
        let concl = j.conclusion().clone();
        let m = |i: &usize| map[i];
        let new_index = match &line.justification {
            Justification::Assume => em.push(&ctx, concl, Justification::Assume),
            Justification::Taut => em.push(&ctx, concl, Justification::Taut),
            Justification::Ax(Schema::BoxDrop | Schema::RhdExtend) => {
                em.push(&ctx, concl, Justification::Taut)
            }
            Justification::Ax(s) => em.push(&ctx, concl, Justification::Ax(*s)),
            Justification::Mp(i, k) => em.push(&ctx, concl, Justification::Mp(m(i), m(k))),
            Justification::Nec(_, i) => em.push(&ctx, concl, Justification::Nec(Label::empty(), m(i))),
            Justification::DeductionIn(i) => em.push(&ctx, concl, Justification::DeductionIn(m(i))),
            Justification::DeductionOut(i) => em.push(&ctx, concl, Justification::DeductionOut(m(i))),
            Justification::PRule { label, outer, var, premise } => {
                let prem = &d.line(*premise).expect("checked").judgment;
                let split = p_rule_decompose(&line.judgment, prem, label, outer, var).expect("checked");
                expand_p_rule(&mut em, &split, &concl, m(premise))
            }
        };
        map.insert(line.index, new_index);
    }
    Ok(em.out)
}

fn expand_p_rule(em: &mut Emitter, split: &super::PRuleSplit, concl: &Formula, premise: usize) -> usize {
    let gamma = erase_all(&split.gamma);
    let delta = erase_all(&split.delta);
    let hyp = Formula::rhd(Label::empty(), split.antecedent.erase_labels(), split.consequent.erase_labels());
    let boxed = Formula::boxed(Label::empty(), hyp.clone());
    let boxed_to_c = Formula::implies(boxed.clone(), concl.clone());

    let mut moved = delta.clone();
    moved.push(boxed.clone());
    let discharged = Formula::implies(Formula::and_all(moved), concl.clone());
    let mut step = em.push(&gamma, discharged.clone(), Justification::DeductionOut(premise));
    if !delta.is_empty() {
        // The erased side hypotheses all have the shape X -> X.
        let t = em.push(&gamma, Formula::implies(discharged, boxed_to_c.clone()), Justification::Taut);
        step = em.push(&gamma, boxed_to_c.clone(), Justification::Mp(step, t));
    }
    let hyp_to_boxed = Formula::implies(hyp.clone(), boxed);
    let ax = em.push(&gamma, hyp_to_boxed.clone(), Justification::Ax(Schema::P));
    let hyp_to_c = Formula::implies(hyp.clone(), concl.clone());
    let chain = Formula::implies(hyp_to_boxed.clone(), hyp_to_c.clone());
    let t = em.push(&gamma, Formula::implies(boxed_to_c, chain.clone()), Justification::Taut);
    let s = em.push(&gamma, chain, Justification::Mp(step, t));
    let s = em.push(&gamma, hyp_to_c, Justification::Mp(ax, s));
    let mut full = gamma;
    full.push(hyp);
    em.push(&full, concl.clone(), Justification::DeductionIn(s))
}
