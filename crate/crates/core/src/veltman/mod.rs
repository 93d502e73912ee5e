//! Finite ordinary Veltman models for the label-free fragment.
//!
//! Worlds are `0..n` with `n <= 32`; relations are stored as successor
//! bitmasks. `S_w` relates R-successors of `w`: `u S_w v` is recorded as bit
//! `v` of `s[w][u]`.

mod search;
mod text;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::Formula;

pub use search::{
    countermodel_search, frame_valid, frames, Countermodel, SearchBudget, SearchError, SearchOutcome,
    MAX_SEARCH_WORLDS, MAX_VALUATION_BITS,
};
pub use text::{parse_model, print_model, ModelParseError};

pub const MAX_WORLDS: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    n: usize,
    r: Vec<u32>,
    s: Vec<Vec<u32>>,
}

impl Frame {
    /// `n` worlds, no relations.
    pub fn new(n: usize) -> Self {
        assert!((1..=MAX_WORLDS).contains(&n), "world count {n} out of range");
        Frame { n, r: vec![0; n], s: vec![vec![0; n]; n] }
    }

    pub fn worlds(&self) -> usize {
        self.n
    }

    pub fn add_r(&mut self, w: usize, u: usize) {
        self.r[w] |= 1 << u;
    }

    /// Records `u S_w v`.
    pub fn add_s(&mut self, w: usize, u: usize, v: usize) {
        self.s[w][u] |= 1 << v;
    }

    pub fn r(&self, w: usize, u: usize) -> bool {
        self.r[w] >> u & 1 == 1
    }

    pub fn s(&self, w: usize, u: usize, v: usize) -> bool {
        self.s[w][u] >> v & 1 == 1
    }

    pub fn successors(&self, w: usize) -> u32 {
        self.r[w]
    }

    /// Adds whatever `S_w` pairs well-formedness forces: reflexivity on
    /// `R[w]`, `wRuRv ⇒ u S_w v`, and transitive closure. `R` is left alone.
    pub fn repair_s(&mut self) {
        for w in 0..self.n {
            let dom = self.r[w];
            for u in bits(dom) {
                self.s[w][u] &= dom;
                self.s[w][u] |= 1 << u | (self.r[u] & dom);
            }
            for u in 0..self.n {
                if dom >> u & 1 == 0 {
                    self.s[w][u] = 0;
                }
            }
            loop {
                let mut changed = false;
                for u in bits(dom) {
                    let mut row = self.s[w][u];
                    for v in bits(self.s[w][u]) {
                        row |= self.s[w][v];
                    }
                    if row != self.s[w][u] {
                        self.s[w][u] = row;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }

    /// The first violated frame condition, if any.
    pub fn violation(&self) -> Option<String> {
        let all = mask(self.n);
        for w in 0..self.n {
            if self.r[w] & !all != 0 || self.s[w].iter().any(|row| row & !all != 0) {
                return Some(format!("relation at {w} mentions a world outside 0..{}", self.n));
            }
            if self.r(w, w) {
                return Some(format!("R is reflexive at {w}"));
            }
            for u in bits(self.r[w]) {
                if self.r[u] & !self.r[w] != 0 {
                    return Some(format!("R is not transitive through {w} R {u}"));
                }
            }
            let dom = self.r[w];
            for u in 0..self.n {
                let row = self.s[w][u];
                if dom >> u & 1 == 0 {
                    if row != 0 {
                        return Some(format!("S_{w} relates {u}, which is not an R-successor of {w}"));
                    }
                    continue;
                }
                if row & !dom != 0 {
                    return Some(format!("S_{w} leaves R[{w}] from {u}"));
                }
                if row >> u & 1 == 0 {
                    return Some(format!("S_{w} is not reflexive at {u}"));
                }
                if self.r[u] & dom & !row != 0 {
                    return Some(format!("{w} R {u} R v without {u} S_{w} v"));
                }
                for v in bits(row) {
                    if self.s[w][v] & !row != 0 {
                        return Some(format!("S_{w} is not transitive through {u}, {v}"));
                    }
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeltmanModel {
    pub frame: Frame,
    /// Worlds where each letter holds; absent letters hold nowhere.
    pub val: BTreeMap<String, u32>,
}

impl VeltmanModel {
    pub fn new(frame: Frame) -> Self {
        VeltmanModel { frame, val: BTreeMap::new() }
    }

    pub fn set(&mut self, letter: &str, worlds: u32) {
        self.val.insert(letter.to_string(), worlds);
    }
}

pub fn check_wf(m: &VeltmanModel) -> bool {
    let all = mask(m.frame.n);
    m.frame.violation().is_none() && m.val.values().all(|v| v & !all == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula carries a nonempty label: {0}")]
    Labeled(Formula),
    #[error("world {0} is not in the model")]
    NoSuchWorld(usize),
}

pub(crate) fn mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn bits(x: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| x >> i & 1 == 1)
}

/// The set of worlds where `f` holds.
pub fn truth_set(m: &VeltmanModel, f: &Formula) -> Result<u32, EvalError> {
    if !f.is_label_free() {
        return Err(EvalError::Labeled(f.clone()));
    }
    Ok(worlds_of(m, f))
}

fn worlds_of(m: &VeltmanModel, f: &Formula) -> u32 {
    let fr = &m.frame;
    let all = mask(fr.n);
    match f {
        Formula::Var(p) => m.val.get(p).copied().unwrap_or(0) & all,
        Formula::Top => all,
        Formula::Bot => 0,
        Formula::Not(a) => !worlds_of(m, a) & all,
        Formula::And(a, b) => worlds_of(m, a) & worlds_of(m, b),
        Formula::Or(a, b) => worlds_of(m, a) | worlds_of(m, b),
        Formula::Implies(a, b) => (!worlds_of(m, a) | worlds_of(m, b)) & all,
        Formula::Box(_, a) => {
            let a = worlds_of(m, a);
            (0..fr.n).filter(|&w| fr.r[w] & !a == 0).fold(0, |acc, w| acc | 1 << w)
        }
        Formula::Rhd(_, a, b) => {
            let (a, b) = (worlds_of(m, a), worlds_of(m, b));
            (0..fr.n)
                .filter(|&w| bits(fr.r[w] & a).all(|u| fr.s[w][u] & b != 0))
                .fold(0, |acc, w| acc | 1 << w)
        }
    }
}

/// `w ⊨ f`.
pub fn eval(m: &VeltmanModel, w: usize, f: &Formula) -> Result<bool, EvalError> {
    if w >= m.frame.n {
        return Err(EvalError::NoSuchWorld(w));
    }
    Ok(truth_set(m, f)? >> w & 1 == 1)
}
