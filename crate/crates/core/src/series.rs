//! The slim and broad families of principles.
//!
//! Slim formulas use the letters `a0, b0, c0, e1, a1, …`; broad ones use
//! `a, b, c` and `d1, d2, …`. All generated formulas are label-free.

use thiserror::Error;

use crate::formula::{Formula, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("U and V are defined only for n >= 1")]
    IndexZero,
}

fn v(name: &str, n: usize) -> Formula {
    Formula::var(format!("{name}{n}"))
}

fn rhd(a: Formula, b: Formula) -> Formula {
    Formula::rhd(Label::empty(), a, b)
}

fn bx(a: Formula) -> Formula {
    Formula::boxed(Label::empty(), a)
}

fn dia(a: Formula) -> Formula {
    Formula::diamond(Label::empty(), a)
}

/// `¬(A ⊳ ¬C)`.
pub fn not_rhd_not(a: Formula, c: Formula) -> Formula {
    Formula::not(rhd(a, Formula::not(c)))
}

/// `A_n`.
pub fn slim_a(n: usize) -> Formula {
    v("a", n)
}

/// `B_n`.
pub fn slim_b(n: usize) -> Formula {
    v("b", n)
}

/// `C_n`.
pub fn slim_c(n: usize) -> Formula {
    v("c", n)
}

/// `E_n`, for `n >= 1`.
pub fn slim_e(n: usize) -> Formula {
    v("e", n)
}

/// `B_n ∧ X_{n-1}`, with the conjunct elided at `n = 0`.
pub fn slim_b_with_x(n: usize, keep_top: bool) -> Formula {
    match n {
        0 if keep_top => Formula::and(slim_b(0), Formula::Top),
        0 => slim_b(0),
        _ => Formula::and(slim_b(n), gen_x_with(n - 1, keep_top)),
    }
}

pub fn gen_x(n: usize) -> Formula {
    gen_x_with(n, false)
}

/// `X_n`; with `keep_top` the base case is `A_0 ⊳ B_0 ∧ ⊤` instead of `A_0 ⊳ B_0`.
pub fn gen_x_with(n: usize, keep_top: bool) -> Formula {
    rhd(slim_a(n), slim_b_with_x(n, keep_top))
}

pub fn gen_y(n: usize) -> Formula {
    let head = not_rhd_not(slim_a(n), slim_c(n));
    match n {
        0 => head,
        _ => Formula::and(head, rhd(slim_e(n), gen_y(n - 1))),
    }
}

pub fn gen_z(n: usize) -> Formula {
    gen_z_with(n, false)
}

pub fn gen_z_with(n: usize, keep_top: bool) -> Formula {
    match n {
        0 => Formula::and(slim_b(0), bx(slim_c(0))),
        _ => Formula::and_all([
            slim_b(n),
            gen_x_with(n - 1, keep_top),
            bx(slim_c(n)),
            rhd(slim_e(n), slim_a(n - 1)),
            rhd(slim_e(n), gen_z_with(n - 1, keep_top)),
        ]),
    }
}

/// `X_n → Y_n ⊳ Z_n`.
pub fn gen_slim(n: usize) -> Formula {
    gen_slim_with(n, false)
}

pub fn gen_slim_with(n: usize, keep_top: bool) -> Formula {
    Formula::implies(gen_x_with(n, keep_top), rhd(gen_y(n), gen_z_with(n, keep_top)))
}

pub fn broad_a() -> Formula {
    Formula::var("a")
}

pub fn broad_b() -> Formula {
    Formula::var("b")
}

pub fn broad_c() -> Formula {
    Formula::var("c")
}

/// `D_n`, for `n >= 1`.
pub fn broad_d(n: usize) -> Formula {
    v("d", n)
}

pub fn gen_u(n: usize) -> Result<Formula, SeriesError> {
    match n {
        0 => Err(SeriesError::IndexZero),
        1 => Ok(dia(not_rhd_not(broad_d(1), broad_c()))),
        _ => Ok(dia(Formula::and(rhd(broad_d(n - 1), broad_d(n)), gen_u(n - 1)?))),
    }
}

pub fn gen_v(n: usize) -> Result<Formula, SeriesError> {
    match n {
        0 => Err(SeriesError::IndexZero),
        1 => Ok(bx(rhd(broad_d(1), Formula::not(broad_c())))),
        _ => Ok(bx(Formula::implies(rhd(broad_d(n - 1), broad_d(n)), gen_v(n - 1)?))),
    }
}

/// `B ∧ □C`.
pub fn broad_target() -> Formula {
    Formula::and(broad_b(), bx(broad_c()))
}

/// Left side of the consequent of `R^n`.
pub fn broad_lhs(n: usize) -> Formula {
    match n {
        0 => not_rhd_not(broad_a(), broad_c()),
        _ => Formula::and(gen_u(n).expect("n >= 1"), rhd(broad_d(n), broad_a())),
    }
}

pub fn gen_broad(n: usize) -> Formula {
    Formula::implies(rhd(broad_a(), broad_b()), rhd(broad_lhs(n), broad_target()))
}

/// The original slim series, built by iterated simultaneous substitution from `R_0`.
pub fn gen_original_r(n: usize) -> Formula {
    let mut f = Formula::implies(
        rhd(slim_a(0), slim_b(0)),
        rhd(not_rhd_not(slim_a(0), slim_c(0)), Formula::and(slim_b(0), bx(slim_c(0)))),
    );
    for step in 1..=n {
        let m = (step - 1) / 2;
        let (a, b, c) = (slim_a(m), slim_b(m), slim_c(m));
        let (a1, b1, c1, e1) = (slim_a(m + 1), slim_b(m + 1), slim_c(m + 1), slim_e(m + 1));
        let subst = if step % 2 == 1 {
            let y = not_rhd_not(a, c.clone());
            let z = Formula::and(b, bx(c));
            vec![
                (y.clone(), Formula::and(y, rhd(e1.clone(), dia(a1.clone())))),
                (z.clone(), Formula::and(z, rhd(e1, a1))),
            ]
        } else {
            let e_a = rhd(e1.clone(), a1.clone());
            vec![
                (b.clone(), Formula::and(b, rhd(a1.clone(), b1.clone()))),
                (dia(a1.clone()), not_rhd_not(a1, c1.clone())),
                (e_a.clone(), Formula::and(e_a, rhd(e1, Formula::and(b1, bx(c1))))),
            ]
        };
        f = f.replace_all(&subst);
    }
    f
}
