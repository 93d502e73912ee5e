//! Structural matching of axiom schemas.
//!
//! Every schema is matched by walking the candidate formula against the
//! schema's shape, binding the formula metavariables `A`, `B`, `C` and the
//! label metavariables on first sight and comparing on every later sight.

use std::fmt;
use std::str::FromStr;

use crate::formula::{Formula, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    L1,
    L2,
    L3,
    J1,
    J2a,
    J2b,
    J3,
    J4,
    J5,
    BoxDrop,
    RhdExtend,
    /// `A ⊳ B → □(A ⊳ B)`; ILP mode only.
    P,
}

impl Schema {
    pub const ALL: [Schema; 12] = [
        Schema::L1,
        Schema::L2,
        Schema::L3,
        Schema::J1,
        Schema::J2a,
        Schema::J2b,
        Schema::J3,
        Schema::J4,
        Schema::J5,
        Schema::BoxDrop,
        Schema::RhdExtend,
        Schema::P,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Schema::L1 => "L1",
            Schema::L2 => "L2",
            Schema::L3 => "L3",
            Schema::J1 => "J1",
            Schema::J2a => "J2a",
            Schema::J2b => "J2b",
            Schema::J3 => "J3",
            Schema::J4 => "J4",
            Schema::J5 => "J5",
            Schema::BoxDrop => "BoxDrop",
            Schema::RhdExtend => "RhdExtend",
            Schema::P => "P",
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown axiom schema `{0}`")]
pub struct UnknownSchema(pub String);

impl FromStr for Schema {
    type Err = UnknownSchema;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Schema::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownSchema(s.to_string()))
    }
}

fn implies(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

fn and(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(a, b) => Some((a, b)),
        _ => None,
    }
}

fn boxed(f: &Formula) -> Option<(&Label, &Formula)> {
    match f {
        Formula::Box(l, a) => Some((l, a)),
        _ => None,
    }
}

fn rhd(f: &Formula) -> Option<(&Label, &Formula, &Formula)> {
    match f {
        Formula::Rhd(l, a, b) => Some((l, a, b)),
        _ => None,
    }
}

fn or(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Or(a, b) => Some((a, b)),
        _ => None,
    }
}

/// `outer` is `inner` extended by exactly one variable.
fn one_longer(outer: &Label, inner: &Label) -> bool {
    matches!(outer.split_last(), Some((init, _)) if &init == inner)
}

fn matches(schema: Schema, f: &Formula) -> Option<()> {
    let ok = |b: bool| if b { Some(()) } else { None };
    match schema {
        // □a(A → B) → (□a A → □a B)
        Schema::L1 => {
            let (lhs, rhs) = implies(f)?;
            let (la, ab) = boxed(lhs)?;
            let (a, b) = implies(ab)?;
            let (box_a, box_b) = implies(rhs)?;
            let (l2, a2) = boxed(box_a)?;
            let (l3, b2) = boxed(box_b)?;
            ok(la == l2 && la == l3 && a == a2 && b == b2)
        }
        // □a A → □b □a A
        Schema::L2 => {
            let (lhs, rhs) = implies(f)?;
            let (_, inner) = boxed(rhs)?;
            ok(lhs == inner && boxed(lhs).is_some())
        }
        // □a(□a A → A) → □a A
        Schema::L3 => {
            let (lhs, rhs) = implies(f)?;
            let (la, body) = boxed(lhs)?;
            let (box_a, a) = implies(body)?;
            let (l2, a2) = boxed(box_a)?;
            let (l3, a3) = boxed(rhs)?;
            ok(la == l2 && la == l3 && a == a2 && a == a3)
        }
        // □a(A → B) → A ⊳a B
        Schema::J1 => {
            let (lhs, rhs) = implies(f)?;
            let (la, ab) = boxed(lhs)?;
            let (a, b) = implies(ab)?;
            let (l2, a2, b2) = rhd(rhs)?;
            ok(la == l2 && a == a2 && b == b2)
        }
        // (A ⊳ B) ∧ (B ⊳a C) → A ⊳a C
        Schema::J2a => {
            let (lhs, rhs) = implies(f)?;
            let (ab, bc) = and(lhs)?;
            let (l0, a, b) = rhd(ab)?;
            let (la, b2, c) = rhd(bc)?;
            let (l2, a2, c2) = rhd(rhs)?;
            ok(l0.is_empty() && la == l2 && a == a2 && b == b2 && c == c2)
        }
        // (A ⊳a B) ∧ □a(B → C) → A ⊳a C
        Schema::J2b => {
            let (lhs, rhs) = implies(f)?;
            let (ab, box_bc) = and(lhs)?;
            let (la, a, b) = rhd(ab)?;
            let (l2, bc) = boxed(box_bc)?;
            let (b2, c) = implies(bc)?;
            let (l3, a2, c2) = rhd(rhs)?;
            ok(la == l2 && la == l3 && a == a2 && b == b2 && c == c2)
        }
        // (A ⊳a C) ∧ (B ⊳a C) → A ∨ B ⊳a C
        Schema::J3 => {
            let (lhs, rhs) = implies(f)?;
            let (ac, bc) = and(lhs)?;
            let (la, a, c) = rhd(ac)?;
            let (l2, b, c2) = rhd(bc)?;
            let (l3, a_or_b, c3) = rhd(rhs)?;
            let (a2, b2) = or(a_or_b)?;
            ok(la == l2 && la == l3 && a == a2 && b == b2 && c == c2 && c == c3)
        }
        // A ⊳a B → (◇A → ◇a B)
        Schema::J4 => {
            let (lhs, rhs) = implies(f)?;
            let (la, a, b) = rhd(lhs)?;
            let (dia_a, dia_b) = implies(rhs)?;
            let (l0, a2) = dia_a.as_diamond()?;
            let (l2, b2) = dia_b.as_diamond()?;
            ok(l0.is_empty() && la == l2 && a == a2 && b == b2)
        }
        // A ⊳a ◇b B → A ⊳b B
        Schema::J5 => {
            let (lhs, rhs) = implies(f)?;
            let (_, a, dia_b) = rhd(lhs)?;
            let (lb, b) = dia_b.as_diamond()?;
            let (l2, a2, b2) = rhd(rhs)?;
            ok(lb == l2 && a == a2 && b == b2)
        }
        // □(a,k) A → □a A
        Schema::BoxDrop => {
            let (lhs, rhs) = implies(f)?;
            let (lak, a) = boxed(lhs)?;
            let (la, a2) = boxed(rhs)?;
            ok(a == a2 && one_longer(lak, la))
        }
        // A ⊳a B → A ⊳(a,k) B
        Schema::RhdExtend => {
            let (lhs, rhs) = implies(f)?;
            let (la, a, b) = rhd(lhs)?;
            let (lak, a2, b2) = rhd(rhs)?;
            ok(a == a2 && b == b2 && one_longer(lak, la))
        }
        // A ⊳ B → □(A ⊳ B)
        Schema::P => {
            let (lhs, rhs) = implies(f)?;
            let (l0, _, _) = rhd(lhs)?;
            let (l1, body) = boxed(rhs)?;
            ok(l0.is_empty() && l1.is_empty() && body == lhs)
        }
    }
}

/// True iff `f` is an instance of `schema`.
pub fn match_axiom(schema: Schema, f: &Formula) -> bool {
    matches(schema, f).is_some()
}
