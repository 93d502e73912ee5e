//! Proptest generators for well-formed formulas.

use proptest::prelude::*;

use super::{Formula, Label};

pub fn label() -> impl Strategy<Value = Label> {
    prop_oneof![
        3 => Just(Label::empty()),
        1 => Just(Label::from_vars(["k"]).unwrap()),
        1 => Just(Label::from_vars(["j"]).unwrap()),
        1 => Just(Label::from_vars(["k", "j"]).unwrap()),
    ]
}

/// Formulas with at most `depth` levels of nesting over `letters` variables.
pub fn formula(depth: u32, letters: usize) -> impl Strategy<Value = Formula> {
    let names: Vec<String> =
        ["p", "q", "r", "s", "t"][..letters.clamp(1, 5)].iter().map(|s| s.to_string()).collect();
    let leaf = prop_oneof![
        8 => proptest::sample::select(names).prop_map(Formula::Var),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ];
    leaf.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (label(), inner.clone()).prop_map(|(l, a)| Formula::boxed(l, a)),
            (label(), inner.clone()).prop_map(|(l, a)| Formula::diamond(l, a)),
            (label(), inner.clone(), inner).prop_map(|(l, a, b)| Formula::rhd(l, a, b)),
        ]
    })
}
