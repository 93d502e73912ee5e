use super::{Formula, Label};

// Binding strength, loosest first.
const IMPL: u8 = 1;
const RHD: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

pub(super) fn print(f: &Formula) -> String {
    let mut out = String::new();
    go(f, IMPL, &mut out);
    out
}

fn label(l: &Label, out: &mut String) {
    if !l.is_empty() {
        out.push_str(&l.to_string());
    }
}

fn go(f: &Formula, ctx: u8, out: &mut String) {
    let own = match f {
        Formula::Implies(..) => IMPL,
        Formula::Rhd(..) => RHD,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    };
    let wrap = own < ctx;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Var(p) => out.push_str(p),
        Formula::Top => out.push_str("true"),
        Formula::Bot => out.push_str("false"),
        Formula::Implies(a, b) => {
            go(a, RHD, out);
            out.push_str(" -> ");
            go(b, IMPL, out);
        }
        Formula::Rhd(l, a, b) => {
            go(a, OR, out);
            out.push_str(" |>");
            label(l, out);
            out.push(' ');
            go(b, OR, out);
        }
        Formula::Or(a, b) => {
            go(a, OR, out);
            out.push_str(" | ");
            go(b, AND, out);
        }
        Formula::And(a, b) => {
            go(a, AND, out);
            out.push_str(" & ");
            go(b, UNARY, out);
        }
        Formula::Not(_) if f.as_diamond().is_some() => {
            let (l, a) = f.as_diamond().unwrap();
            out.push_str("<>");
            label(l, out);
            out.push(' ');
            go(a, UNARY, out);
        }
        Formula::Not(a) => {
            out.push('~');
            go(a, UNARY, out);
        }
        Formula::Box(l, a) => {
            out.push('#');
            label(l, out);
            out.push(' ');
            go(a, UNARY, out);
        }
    }
    if wrap {
        out.push(')');
    }
}
