//! Helpers shared by the integration tests.
#![allow(dead_code)]

use fil_core::formula::{Formula, Label};
use fil_core::kernel::{Derivation, Judgment};
use fil_core::synth;
use rand::seq::SliceRandom;
use rand::Rng;

/// Every derivation the synthesizer offers, with a display name.
pub fn synthesized(max_n: usize) -> Vec<(String, Derivation)> {
    let mut out = vec![
        ("W".to_string(), synth::derive_w().unwrap()),
        ("M0".to_string(), synth::derive_m0().unwrap()),
        ("R".to_string(), synth::derive_r().unwrap()),
    ];
    for n in 0..=max_n {
        out.push((format!("slim({n})"), synth::derive_slim(n).unwrap()));
    }
    for n in 0..=max_n {
        out.push((format!("broad({n})"), synth::derive_broad(n).unwrap()));
    }
    out
}

fn random_label(rng: &mut impl Rng) -> Label {
    match rng.gen_range(0..6) {
        0 => Label::from_vars(["k"]).unwrap(),
        1 => Label::from_vars(["j"]).unwrap(),
        2 => Label::from_vars(["k", "j"]).unwrap(),
        _ => Label::empty(),
    }
}

/// A random well-formed formula over `letters`, nesting at most `depth` deep.
pub fn random_formula(rng: &mut impl Rng, depth: u32, letters: &[&str], labels: bool) -> Formula {
    let label = |rng: &mut _| if labels { random_label(rng) } else { Label::empty() };
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::var(*letters.choose(rng).unwrap()),
        };
    }
    let sub = |rng: &mut _| random_formula(rng, depth - 1, letters, labels);
    match rng.gen_range(0..7) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::boxed(label(rng), sub(rng)),
        5 => Formula::diamond(label(rng), sub(rng)),
        _ => {
            let l = label(rng);
            Formula::rhd(l, sub(rng), sub(rng))
        }
    }
}

/// Rebuilds `f`, handing the `target`-th node accepted by `pick` (preorder) to `edit`.
fn edit_nth(
    f: &Formula,
    seen: &mut usize,
    target: usize,
    pick: &dyn Fn(&Formula) -> bool,
    edit: &dyn Fn(&Formula) -> Formula,
) -> Formula {
    if pick(f) {
        *seen += 1;
        if *seen - 1 == target {
            return edit(f);
        }
    }
    let mut go = |g: &Formula| edit_nth(g, seen, target, pick, edit);
    match f {
        Formula::Var(_) | Formula::Top | Formula::Bot => f.clone(),
        Formula::Not(a) => Formula::not(go(a)),
        Formula::And(a, b) => {
            let a = go(a);
            Formula::and(a, go(b))
        }
        Formula::Or(a, b) => {
            let a = go(a);
            Formula::or(a, go(b))
        }
        Formula::Implies(a, b) => {
            let a = go(a);
            Formula::implies(a, go(b))
        }
        Formula::Box(l, a) => Formula::boxed(l.clone(), go(a)),
        Formula::Rhd(l, a, b) => {
            let a = go(a);
            Formula::rhd(l.clone(), a, go(b))
        }
    }
}

fn count(f: &Formula, pick: &dyn Fn(&Formula) -> bool) -> usize {
    let mut n = 0;
    f.visit(&mut |g| n += pick(g) as usize);
    n
}

/// Applies `edit` to the `site`-th picked node across the judgment, context first.
fn edit_judgment(
    j: &Judgment,
    site: usize,
    pick: &dyn Fn(&Formula) -> bool,
    edit: &dyn Fn(&Formula) -> Formula,
) -> Judgment {
    let mut seen = 0;
    let context = j.context().iter().map(|f| edit_nth(f, &mut seen, site, pick, edit)).collect();
    let conclusion = edit_nth(j.conclusion(), &mut seen, site, pick, edit);
    Judgment::new(context, conclusion)
}

fn sites(j: &Judgment, pick: &dyn Fn(&Formula) -> bool) -> usize {
    j.formulas().map(|f| count(f, pick)).sum()
}

fn is_modal(f: &Formula) -> bool {
    matches!(f, Formula::Box(..) | Formula::Rhd(..))
}

fn is_var(f: &Formula) -> bool {
    matches!(f, Formula::Var(_))
}

fn relabel(f: &Formula, l: Label) -> Formula {
    match f {
        Formula::Box(_, a) => Formula::Box(l, a.clone()),
        Formula::Rhd(_, a, b) => Formula::Rhd(l, a.clone(), b.clone()),
        _ => unreachable!(),
    }
}

fn label_of(f: &Formula) -> &Label {
    match f {
        Formula::Box(l, _) | Formula::Rhd(l, ..) => l,
        _ => unreachable!(),
    }
}

/// A different label for one modal site: drops or swaps the last variable, or adds `k`.
pub fn mutate_label(j: &Judgment, rng: &mut impl Rng) -> Option<Judgment> {
    let n = sites(j, &is_modal);
    if n == 0 {
        return None;
    }
    let site = rng.gen_range(0..n);
    let swap = rng.gen_bool(0.5);
    let edit = move |f: &Formula| {
        let l = label_of(f);
        let new = match l.split_last() {
            None => Label::from_vars(["k"]).unwrap(),
            Some((init, _)) if !swap => init,
            Some((init, last)) => {
                let other = ["m", "k", "j"]
                    .into_iter()
                    .find(|v| *v != last.name() && !init.vars().iter().any(|x| x.name() == *v));
                init.extend(fil_core::formula::IVar::new(other.unwrap()).unwrap()).unwrap()
            }
        };
        relabel(f, new)
    };
    Some(edit_judgment(j, site, &is_modal, &edit))
}

/// Renames one occurrence of a propositional letter.
pub fn mutate_variable(j: &Judgment, rng: &mut impl Rng) -> Option<Judgment> {
    let n = sites(j, &is_var);
    if n == 0 {
        return None;
    }
    let site = rng.gen_range(0..n);
    let pool = ["a", "b", "c", "z"];
    let choice = rng.gen_range(0..pool.len() - 1);
    let edit = move |f: &Formula| {
        let Formula::Var(p) = f else { unreachable!() };
        let others: Vec<&str> = pool.iter().copied().filter(|q| q != p).collect();
        Formula::var(others[choice % others.len()])
    };
    Some(edit_judgment(j, site, &is_var, &edit))
}

/// Drops one hypothesis, or adds a stray one.
pub fn mutate_context(j: &Judgment, rng: &mut impl Rng) -> Judgment {
    let mut context = j.context().to_vec();
    if !context.is_empty() && rng.gen_bool(0.5) {
        context.remove(rng.gen_range(0..context.len()));
    } else {
        context.push(Formula::var("z"));
    }
    Judgment::new(context, j.conclusion().clone())
}

/// Replaces the judgment of the line at position `pos`.
pub fn with_judgment(d: &Derivation, pos: usize, j: Judgment) -> Derivation {
    let mut d = d.clone();
    d.lines[pos].judgment = j;
    d
}
