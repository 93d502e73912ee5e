//! Frame enumeration, exhaustive validity and countermodel search.
//!
//! Frames are enumerated by world count, then by the bit encoding of `R`
//! (bit `i*n + j` for `i R j`), then by the `S_w` encodings with `w = 0`
//! most significant. Valuations are indexed so that bit `l*n + w` of the
//! index says whether the `l`-th letter (alphabetically) holds at `w`.
//! Truth values are computed for all valuations at once, one bit each.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use super::{bits, Frame, VeltmanModel};
use crate::formula::Formula;

/// Largest world count the enumerator accepts.
pub const MAX_SEARCH_WORLDS: usize = 5;
/// Largest `letters × worlds` handled by exhaustive valuation.
pub const MAX_VALUATION_BITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_worlds: usize,
    pub max_letters: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_worlds: 4, max_letters: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: VeltmanModel,
    pub world: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Countermodel),
    ValidWithinBudget,
    BudgetExceeded(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("formula carries a nonempty label: {0}")]
    Labeled(Formula),
    #[error("at least one world is required")]
    ZeroWorlds,
    #[error("frame enumeration supports at most {MAX_SEARCH_WORLDS} worlds, got {0}")]
    TooManyWorlds(usize),
    #[error("{0} valuation bits exceed the cap of {MAX_VALUATION_BITS}")]
    TooManyValuations(usize),
}

/// All irreflexive transitive relations on `n` worlds, in encoding order.
fn strict_orders(n: usize) -> Vec<Vec<u32>> {
    let positions: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for m in 0u64..1 << positions.len() {
        let mut r = vec![0u32; n];
        for (b, &(i, j)) in positions.iter().enumerate() {
            if m >> b & 1 == 1 {
                r[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| bits(r[i]).all(|u| r[u] & !r[i] == 0));
        if transitive {
            out.push(r);
        }
    }
    out
}

/// Admissible `S_w` relations for one world, as successor rows, in encoding order.
fn s_choices(n: usize, r: &[u32], w: usize) -> Vec<Vec<u32>> {
    let dom = r[w];
    let mut base = vec![0u32; n];
    for u in bits(dom) {
        base[u] = 1 << u | (r[u] & dom);
    }
    let optional: Vec<(usize, usize)> = bits(dom)
        .flat_map(|u| bits(dom).map(move |v| (u, v)))
        .filter(|&(u, v)| base[u] >> v & 1 == 0)
        .collect();
    let mut out = Vec::new();
    for m in 0u64..1 << optional.len() {
        let mut rows = base.clone();
        for (b, &(u, v)) in optional.iter().enumerate() {
            if m >> b & 1 == 1 {
                rows[u] |= 1 << v;
            }
        }
        let transitive = bits(dom).all(|u| bits(rows[u]).all(|v| rows[v] & !rows[u] == 0));
        if transitive {
            out.push(rows);
        }
    }
    out
}

/// Runs `visit` on each well-formed frame over `R = r`, in order, until it returns `Some`.
fn first_over<T>(n: usize, r: &[u32], mut visit: impl FnMut(&Frame) -> Option<T>) -> Option<T> {
    let choices: Vec<Vec<Vec<u32>>> = (0..n).map(|w| s_choices(n, r, w)).collect();
    let mut idx = vec![0usize; n];
    loop {
        let frame = Frame { n, r: r.to_vec(), s: (0..n).map(|w| choices[w][idx[w]].clone()).collect() };
        if let Some(t) = visit(&frame) {
            return Some(t);
        }
        let mut w = n;
        loop {
            if w == 0 {
                return None;
            }
            w -= 1;
            idx[w] += 1;
            if idx[w] < choices[w].len() {
                break;
            }
            idx[w] = 0;
        }
    }
}

/// Every well-formed frame with `n` worlds, in enumeration order.
pub fn frames(n: usize) -> Result<Vec<Frame>, SearchError> {
    check_worlds(n)?;
    let mut out = Vec::new();
    for r in strict_orders(n) {
        first_over(n, &r, |f| {
            out.push(f.clone());
            None::<()>
        });
    }
    Ok(out)
}

fn check_worlds(n: usize) -> Result<(), SearchError> {
    match n {
        0 => Err(SearchError::ZeroWorlds),
        n if n > MAX_SEARCH_WORLDS => Err(SearchError::TooManyWorlds(n)),
        _ => Ok(()),
    }
}

/// Letter truth tables for every valuation over `n` worlds.
struct Space {
    n: usize,
    letters: Vec<String>,
    words: usize,
    tail: u64,
    atoms: Vec<Vec<Vec<u64>>>,
}

impl Space {
    fn new(letters: Vec<String>, n: usize) -> Self {
        let count = 1usize << (letters.len() * n);
        let words = count.div_ceil(64);
        let tail = if count >= 64 { u64::MAX } else { (1u64 << count) - 1 };
        let mut atoms = vec![vec![vec![0u64; words]; n]; letters.len()];
        for (l, per_world) in atoms.iter_mut().enumerate() {
            for (w, row) in per_world.iter_mut().enumerate() {
                let pos = l * n + w;
                for v in (0..count).filter(|v| v >> pos & 1 == 1) {
                    row[v / 64] |= 1 << (v % 64);
                }
            }
        }
        Space { n, letters, words, tail, atoms }
    }

    fn full(&self) -> Vec<u64> {
        let mut v = vec![u64::MAX; self.words];
        if let Some(last) = v.last_mut() {
            *last = self.tail;
        }
        v
    }

    fn model(&self, frame: &Frame, valuation: usize) -> VeltmanModel {
        let val: BTreeMap<String, u32> = self
            .letters
            .iter()
            .enumerate()
            .map(|(l, p)| {
                let worlds = (0..self.n)
                    .filter(|w| valuation >> (l * self.n + w) & 1 == 1)
                    .fold(0u32, |acc, w| acc | 1 << w);
                (p.clone(), worlds)
            })
            .collect();
        VeltmanModel { frame: frame.clone(), val }
    }
}

type Table = Vec<Vec<u64>>;

fn table(fr: &Frame, f: &Formula, sp: &Space) -> Table {
    let n = fr.n;
    let pointwise = |a: Table, b: Table, op: fn(u64, u64) -> u64| -> Table {
        a.iter().zip(&b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| op(*p, *q)).collect()).collect()
    };
    match f {
        Formula::Var(p) => match sp.letters.iter().position(|q| q == p) {
            Some(l) => sp.atoms[l].clone(),
            None => vec![vec![0; sp.words]; n],
        },
        Formula::Top => vec![sp.full(); n],
        Formula::Bot => vec![vec![0; sp.words]; n],
        Formula::Not(a) => pointwise(table(fr, a, sp), vec![sp.full(); n], |x, m| !x & m),
        Formula::And(a, b) => pointwise(table(fr, a, sp), table(fr, b, sp), |x, y| x & y),
        Formula::Or(a, b) => pointwise(table(fr, a, sp), table(fr, b, sp), |x, y| x | y),
        Formula::Implies(a, b) => {
            let na = pointwise(table(fr, a, sp), vec![sp.full(); n], |x, m| !x & m);
            pointwise(na, table(fr, b, sp), |x, y| x | y)
        }
        Formula::Box(_, a) => {
            let a = table(fr, a, sp);
            (0..n)
                .map(|w| {
                    let mut acc = sp.full();
                    for u in bits(fr.r[w]) {
                        acc.iter_mut().zip(&a[u]).for_each(|(x, y)| *x &= y);
                    }
                    acc
                })
                .collect()
        }
        Formula::Rhd(_, a, b) => {
            let (a, b) = (table(fr, a, sp), table(fr, b, sp));
            (0..n)
                .map(|w| {
                    let mut acc = sp.full();
                    for u in bits(fr.r[w]) {
                        let mut reach = vec![0u64; sp.words];
                        for v in bits(fr.s[w][u]) {
                            reach.iter_mut().zip(&b[v]).for_each(|(x, y)| *x |= y);
                        }
                        for i in 0..sp.words {
                            acc[i] &= !a[u][i] | reach[i];
                        }
                    }
                    acc
                })
                .collect()
        }
    }
}

/// Least `(valuation, world)` falsifying `f` on `fr`.
fn first_failure(fr: &Frame, f: &Formula, sp: &Space) -> Option<(usize, usize)> {
    let t = table(fr, f, sp);
    let full = sp.full();
    (0..sp.words).find_map(|i| {
        let fail = (0..fr.n).fold(0u64, |acc, w| acc | (!t[w][i] & full[i]));
        (fail != 0).then(|| {
            let bit = fail.trailing_zeros() as usize;
            let world = (0..fr.n).find(|&w| t[w][i] >> bit & 1 == 0).expect("some world fails");
            (i * 64 + bit, world)
        })
    })
}

fn letters_of(f: &Formula) -> Result<Vec<String>, SearchError> {
    if !f.is_label_free() {
        return Err(SearchError::Labeled(f.clone()));
    }
    Ok(f.letters().into_iter().collect())
}

/// Whether `f` holds at every world of `frame` under every valuation of its letters.
pub fn frame_valid(frame: &Frame, f: &Formula) -> Result<bool, SearchError> {
    let letters = letters_of(f)?;
    let width = letters.len() * frame.n;
    if width > MAX_VALUATION_BITS {
        return Err(SearchError::TooManyValuations(width));
    }
    let sp = Space::new(letters, frame.n);
    Ok(first_failure(frame, f, &sp).is_none())
}

/// Finds the enumeration-least model and world falsifying `f` within `budget`.
pub fn countermodel_search(f: &Formula, budget: SearchBudget) -> Result<SearchOutcome, SearchError> {
    let letters = letters_of(f)?;
    check_worlds(budget.max_worlds)?;
    if letters.len() > budget.max_letters {
        return Ok(SearchOutcome::BudgetExceeded(format!(
            "{} letters, budget allows {}",
            letters.len(),
            budget.max_letters
        )));
    }
    let width = letters.len() * budget.max_worlds;
    if width > MAX_VALUATION_BITS {
        return Ok(SearchOutcome::BudgetExceeded(format!(
            "{width} valuation bits, cap is {MAX_VALUATION_BITS}"
        )));
    }
    for n in 1..=budget.max_worlds {
        let sp = Space::new(letters.clone(), n);
        let hit = strict_orders(n).par_iter().find_map_first(|r| {
            first_over(n, r, |fr| first_failure(fr, f, &sp).map(|(v, w)| (fr.clone(), v, w)))
        });
        if let Some((frame, v, world)) = hit {
            return Ok(SearchOutcome::Found(Countermodel { model: sp.model(&frame, v), world }));
        }
    }
    Ok(SearchOutcome::ValidWithinBudget)
}
