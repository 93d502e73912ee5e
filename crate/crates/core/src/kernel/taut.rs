//! Truth-table decision of propositional validity, treating every maximal
//! `□`/`⊳` subformula and every propositional variable as an atom.

use std::collections::HashMap;

use crate::formula::Formula;

/// Largest atom count the truth table will enumerate.
pub const MAX_TAUT_ATOMS: usize = 22;

#[derive(Clone, Copy, Debug)]
enum Op {
    Atom(usize),
    Const(bool),
    Not,
    And,
    Or,
    Implies,
}

struct Compiled<'a> {
    atoms: HashMap<&'a Formula, usize>,
    ops: Vec<Op>,
}

impl<'a> Compiled<'a> {
    fn compile(&mut self, f: &'a Formula) {
        match f {
            Formula::Top => self.ops.push(Op::Const(true)),
            Formula::Bot => self.ops.push(Op::Const(false)),
            Formula::Not(a) => {
                self.compile(a);
                self.ops.push(Op::Not);
            }
            Formula::And(a, b) => self.binary(a, b, Op::And),
            Formula::Or(a, b) => self.binary(a, b, Op::Or),
            Formula::Implies(a, b) => self.binary(a, b, Op::Implies),
            Formula::Var(_) | Formula::Box(..) | Formula::Rhd(..) => {
                let next = self.atoms.len();
                let id = *self.atoms.entry(f).or_insert(next);
                self.ops.push(Op::Atom(id));
            }
        }
    }

    fn binary(&mut self, a: &'a Formula, b: &'a Formula, op: Op) {
        self.compile(a);
        self.compile(b);
        self.ops.push(op);
    }
}

// Column patterns for the six atoms that vary inside one 64-row word.
const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Outcome of a truth-table run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TautOutcome {
    Valid,
    Invalid,
    TooManyAtoms(usize),
}

pub fn taut_outcome(f: &Formula) -> TautOutcome {
    let mut c = Compiled { atoms: HashMap::new(), ops: Vec::new() };
    c.compile(f);
    let n = c.atoms.len();
    if n > MAX_TAUT_ATOMS {
        return TautOutcome::TooManyAtoms(n);
    }
    let rows: u64 = 1 << n;
    let chunks = rows.div_ceil(64);
    let mask = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };
    let mut stack: Vec<u64> = Vec::with_capacity(16);
    for chunk in 0..chunks {
        stack.clear();
        for op in &c.ops {
            match *op {
                Op::Atom(i) if i < 6 => stack.push(LOW_PATTERNS[i]),
                Op::Atom(i) => {
                    let on = (chunk >> (i - 6)) & 1 == 1;
                    stack.push(if on { u64::MAX } else { 0 });
                }
                Op::Const(b) => stack.push(if b { u64::MAX } else { 0 }),
                Op::Not => {
                    let a = stack.pop().unwrap();
                    stack.push(!a);
                }
                Op::And | Op::Or | Op::Implies => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    stack.push(match op {
                        Op::And => a & b,
                        Op::Or => a | b,
                        _ => !a | b,
                    });
                }
            }
        }
        if stack.pop().unwrap() & mask != mask {
            return TautOutcome::Invalid;
        }
    }
    TautOutcome::Valid
}

/// True iff `f` is a propositional tautology over its modal atoms.
pub fn taut_check(f: &Formula) -> bool {
    taut_outcome(f) == TautOutcome::Valid
}
