mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use fil_core::formula::{Formula, Label};
use fil_core::kernel::{
    check, check_line, parse_derivation, print_derivation, to_ilp, Derivation, Justification, Mode,
};
use fil_core::veltman::{frames, truth_set, VeltmanModel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn small_corpus() -> &'static [(String, Derivation)] {
    static CORPUS: OnceLock<Vec<(String, Derivation)>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut c = common::synthesized(1);
        let fixture = include_str!("fixtures/w_lemma.fil");
        c.push(("fixture".into(), parse_derivation(fixture).unwrap()));
        c
    })
}

/// The erasure property, for a derivation the kernel accepted.
fn assert_erases(d: &Derivation) {
    let theorem = check(d).theorem.expect("accepted");
    let e = to_ilp(d).expect("erasable");
    let report = check(&e);
    assert!(report.accepted, "{:?}", report.errors);
    assert_eq!(report.theorem.unwrap(), theorem.erase_labels());
}

fn mutate_justification(d: &Derivation, pos: usize, pick: u64) -> Derivation {
    let mut d = d.clone();
    let earlier: Vec<usize> = d.lines[..pos].iter().map(|l| l.index).collect();
    let line = &mut d.lines[pos];
    let other = |k: usize| earlier.get(k % earlier.len().max(1)).copied().unwrap_or(0);
    line.justification = match (&line.justification, pick % 3) {
        (Justification::Mp(i, _), 0) => Justification::Mp(*i, other(pick as usize / 3)),
        (Justification::Nec(l, i), 0) => Justification::Nec(l.extend_or_same(), *i),
        (Justification::DeductionOut(i), 0) => Justification::DeductionIn(*i),
        (Justification::DeductionIn(i), 0) => Justification::DeductionOut(*i),
        (Justification::PRule { label, outer, var, premise }, 0) => Justification::PRule {
            label: label.clone(),
            outer: outer.extend_or_same(),
            var: var.clone(),
            premise: *premise,
        },
        (_, 1) => Justification::Taut,
        (_, _) => Justification::Assume,
    };
    d
}

trait ExtendOrSame {
    fn extend_or_same(&self) -> Label;
}

impl ExtendOrSame for Label {
    fn extend_or_same(&self) -> Label {
        self.extend(fil_core::formula::IVar::new("m").unwrap()).unwrap_or_else(|_| self.clone())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    // A single mutation is rejected, or the result is a genuine derivation in its own right.
    #[test]
    fn kernel_survives_single_mutations(which in any::<prop::sample::Index>(),
                                        line in any::<prop::sample::Index>(),
                                        kind in 0u8..4,
                                        seed in any::<u64>()) {
        let corpus = small_corpus();
        let (_, d) = &corpus[which.index(corpus.len())];
        let pos = line.index(d.lines.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = &d.lines[pos].judgment;
        let mutant = match kind {
            0 => common::mutate_label(j, &mut rng).map(|j| common::with_judgment(d, pos, j)),
            1 => common::mutate_variable(j, &mut rng).map(|j| common::with_judgment(d, pos, j)),
            2 => Some(common::with_judgment(d, pos, common::mutate_context(j, &mut rng))),
            _ => Some(mutate_justification(d, pos, seed)),
        };
        let Some(mutant) = mutant else { return Ok(()) };
        let report = catch_unwind(AssertUnwindSafe(|| check(&mutant)));
        prop_assert!(report.is_ok(), "kernel panicked");
        let report = report.unwrap();
        if report.accepted {
            for l in &mutant.lines {
                prop_assert!(check_line(&mutant, l.index).is_ok());
            }
            assert_erases(&mutant);
        } else {
            prop_assert!(!report.errors.is_empty());
        }
        // the text format carries the mutant faithfully
        let again = parse_derivation(&print_derivation(&mutant)).unwrap();
        prop_assert_eq!(check(&again), report);
    }

    #[test]
    fn check_is_a_function_of_the_derivation(which in any::<prop::sample::Index>(), cut in any::<prop::sample::Index>()) {
        let corpus = small_corpus();
        let (_, d) = &corpus[which.index(corpus.len())];
        let mut prefix = d.clone();
        prefix.lines.truncate(cut.index(d.lines.len()) + 1);
        prop_assert_eq!(check(&prefix), check(&prefix.clone()));
    }
}

#[test]
fn synthesized_derivations_are_accepted_and_erase() {
    for (name, d) in common::synthesized(3) {
        let report = check(&d);
        assert!(report.accepted, "{name}: {:?}", report.errors);
        assert_erases(&d);
    }
}

/// Line indices the line at `index` depends on, itself included.
fn ancestors(d: &Derivation, index: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut todo = vec![index];
    while let Some(i) = todo.pop() {
        if seen.insert(i) {
            todo.extend(d.line(i).unwrap().justification.premises());
        }
    }
    seen
}

fn mentions(line_formulas: impl IntoIterator<Item = Formula>, var: &str) -> bool {
    line_formulas.into_iter().any(|f| f.interp_vars().contains(var))
}

#[test]
fn p_rule_variables_are_fresh() {
    let mut corpus = common::synthesized(3);
    corpus.push(("fixture".into(), parse_derivation(include_str!("fixtures/w_lemma.fil")).unwrap()));
    for (name, d) in &corpus {
        let mut vars_used = BTreeSet::new();
        for line in &d.lines {
            let Justification::PRule { label, var, premise, .. } = &line.justification else { continue };
            assert!(vars_used.insert(var.clone()), "{name}: {var} discharged twice");
            assert!(!label.vars().iter().any(|v| v.name() == var));
            assert!(
                !mentions(line.judgment.formulas().cloned(), var),
                "{name} line {}: {var} survives the discharge",
                line.index
            );
            // outside the subproof of its premise, the variable is never seen
            let inside = ancestors(d, *premise);
            for other in d.lines.iter().filter(|l| l.index < line.index && !inside.contains(&l.index)) {
                assert!(
                    !mentions(other.judgment.formulas().cloned(), var),
                    "{name}: {var} occurs at line {} outside its subproof",
                    other.index
                );
            }
        }
        if name.starts_with("slim") || name.starts_with("broad") || name == "W" {
            assert!(!vars_used.is_empty(), "{name} never uses the P-rule");
        }
    }
}

#[test]
fn synthesis_is_reproducible() {
    let first: Vec<String> = common::synthesized(3).iter().map(|(_, d)| print_derivation(d)).collect();
    let second: Vec<String> =
        std::thread::spawn(|| common::synthesized(3).iter().map(|(_, d)| print_derivation(d)).collect())
            .join()
            .unwrap();
    assert_eq!(first, second);
}

fn rhd_subformulas(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    f.visit(&mut |g| {
        if matches!(g, Formula::Rhd(..)) {
            out.insert(g.clone());
        }
    });
    out
}

/// Checks `theorem` on every model up to `max_worlds` in which the
/// persistence instances `C ⊳ D → □(C ⊳ D)` of its ⊳-subformulas hold everywhere.
/// Returns how many models qualified.
fn sound_on_p_models(theorem: &Formula, max_worlds: usize) -> usize {
    let persistence: Vec<Formula> = rhd_subformulas(theorem)
        .into_iter()
        .map(|s| Formula::implies(s.clone(), Formula::boxed(Label::empty(), s)))
        .collect();
    let letters: Vec<String> = theorem.letters().into_iter().collect();
    let mut qualified = 0;
    for n in 1..=max_worlds {
        let all = (1u32 << n) - 1;
        let bits = letters.len() * n;
        qualified += frames(n)
            .unwrap()
            .par_iter()
            .map(|fr| {
                let mut count = 0;
                let mut m = VeltmanModel::new(fr.clone());
                for v in 0u32..1 << bits {
                    for (l, p) in letters.iter().enumerate() {
                        m.set(p, v >> (l * n) & all);
                    }
                    if persistence.iter().all(|p| truth_set(&m, p).unwrap() == all) {
                        count += 1;
                        assert_eq!(truth_set(&m, theorem).unwrap(), all, "{theorem} fails on {m:?}");
                    }
                }
                count
            })
            .sum::<usize>();
    }
    qualified
}

#[test]
fn erased_theorems_hold_on_small_persistent_models() {
    let mut done = BTreeSet::new();
    for (name, d) in common::synthesized(2) {
        let theorem = check(&d).theorem.unwrap().conclusion().erase_labels();
        if !done.insert(theorem.clone()) {
            continue;
        }
        let letters = theorem.letters().len();
        let worlds = (12 / letters.max(1)).min(4);
        let qualified = sound_on_p_models(&theorem, worlds);
        assert!(qualified > 0, "{name}: no model qualified");
    }
}

#[test]
fn erased_derivations_are_in_ilp_mode() {
    for (_, d) in common::synthesized(1) {
        let e = to_ilp(&d).unwrap();
        assert_eq!(e.mode, Mode::Ilp);
        assert!(e.lines.iter().all(|l| l.judgment.formulas().all(Formula::is_label_free)));
    }
}
