//! Text format for derivations.
//!
//! ```text
//! mode FIL
//! 1. # (a |>[k] b) |- # (a |>[k] b) ; assume
//! 2. |- p | ~p ; taut
//! 3. |- #[k] (p | ~p) ; nec [k] 2
//! ```
//!
//! Hypotheses may optionally be wrapped in `[` `]`. `%` starts a comment.

use thiserror::Error;

use super::{Derivation, Judgment, Justification, Line, Mode, Schema};
use crate::formula::{parse, parse_formula_list, parse_label, Formula, Label, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    /// One-based line number in the source text.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

fn formula_err(line: usize, what: &str, e: ParseError) -> FormatError {
    err(line, format!("{what}: {e}"))
}

/// Whitespace-separated tokens, keeping bracketed groups such as `[k, j]` whole.
fn rule_tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '[' => {
                depth += 1;
                cur.push(c);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_justification(no: usize, text: &str) -> Result<Justification, FormatError> {
    let toks = rule_tokens(text);
    let Some((rule, args)) = toks.split_first() else {
        return Err(err(no, "missing rule"));
    };
    let index = |s: &String| -> Result<usize, FormatError> {
        s.parse().map_err(|_| err(no, format!("expected a line index, found `{s}`")))
    };
    let label = |s: &String| -> Result<Label, FormatError> {
        parse_label(s).map_err(|e| formula_err(no, "label", e))
    };
    let arity = |n: usize| -> Result<(), FormatError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(err(no, format!("rule `{rule}` takes {n} arguments, found {}", args.len())))
        }
    };
    match rule.as_str() {
        "assume" => arity(0).map(|_| Justification::Assume),
        "taut" => arity(0).map(|_| Justification::Taut),
        "ax" => {
            arity(1)?;
            let schema: Schema = args[0].parse().map_err(|e| err(no, format!("{e}")))?;
            Ok(Justification::Ax(schema))
        }
        "mp" => {
            arity(2)?;
            Ok(Justification::Mp(index(&args[0])?, index(&args[1])?))
        }
        "nec" => {
            arity(2)?;
            Ok(Justification::Nec(label(&args[0])?, index(&args[1])?))
        }
        "ded-in" => {
            arity(1)?;
            Ok(Justification::DeductionIn(index(&args[0])?))
        }
        "ded-out" => {
            arity(1)?;
            Ok(Justification::DeductionOut(index(&args[0])?))
        }
        "p-rule" => {
            arity(4)?;
            Ok(Justification::PRule {
                label: label(&args[0])?,
                outer: label(&args[1])?,
                var: args[2].clone(),
                premise: index(&args[3])?,
            })
        }
        other => Err(err(no, format!("unknown rule `{other}`"))),
    }
}

fn parse_line(no: usize, text: &str) -> Result<Line, FormatError> {
    let (index, rest) = text.split_once('.').ok_or_else(|| err(no, "expected `INDEX .`"))?;
    let index: usize =
        index.trim().parse().map_err(|_| err(no, format!("bad line index `{}`", index.trim())))?;
    let (judgment, rule) = rest.rsplit_once(';').ok_or_else(|| err(no, "expected `; RULE`"))?;
    let (hyps, concl) = judgment.split_once("|-").ok_or_else(|| err(no, "expected `|-`"))?;
    let mut hyps = hyps.trim();
    if let Some(inner) = hyps.strip_prefix('[').and_then(|h| h.strip_suffix(']')) {
        hyps = inner;
    }
    let context = parse_formula_list(hyps).map_err(|e| formula_err(no, "hypotheses", e))?;
    let conclusion = parse(concl).map_err(|e| formula_err(no, "conclusion", e))?;
    Ok(Line {
        index,
        judgment: Judgment::new(context, conclusion),
        justification: parse_justification(no, rule)?,
    })
}

/// Reads a derivation. An optional `mode FIL` or `mode ILP` line may precede the steps.
pub fn parse_derivation(text: &str) -> Result<Derivation, FormatError> {
    let mut d = Derivation::new(Mode::Fil);
    let mut seen_step = false;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('%').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(mode) = line.strip_prefix("mode") {
            if seen_step {
                return Err(err(no, "`mode` must precede all steps"));
            }
            d.mode = match mode.trim() {
                "FIL" | "fil" => Mode::Fil,
                "ILP" | "ilp" => Mode::Ilp,
                m => return Err(err(no, format!("unknown mode `{m}`"))),
            };
            continue;
        }
        seen_step = true;
        d.lines.push(parse_line(no, line)?);
    }
    Ok(d)
}

fn print_label(l: &Label) -> String {
    l.to_string()
}

pub fn print_justification(j: &Justification) -> String {
    match j {
        Justification::Assume => "assume".into(),
        Justification::Taut => "taut".into(),
        Justification::Ax(s) => format!("ax {s}"),
        Justification::Mp(i, j) => format!("mp {i} {j}"),
        Justification::Nec(l, i) => format!("nec {} {i}", print_label(l)),
        Justification::DeductionIn(i) => format!("ded-in {i}"),
        Justification::DeductionOut(i) => format!("ded-out {i}"),
        Justification::PRule { label, outer, var, premise } => {
            format!("p-rule {} {} {var} {premise}", print_label(label), print_label(outer))
        }
    }
}

/// Writes a derivation; `parse_derivation` reads it back unchanged.
pub fn print_derivation(d: &Derivation) -> String {
    let mut out = format!("mode {}\n", d.mode);
    for l in &d.lines {
        out.push_str(&format!("{}. {} ; {}\n", l.index, l.judgment, print_justification(&l.justification)));
    }
    out
}

/// Parses `h1, h2 |- C` into a judgment.
pub fn parse_judgment(text: &str) -> Result<Judgment, FormatError> {
    let (hyps, concl) = text.split_once("|-").ok_or_else(|| err(1, "expected `|-`"))?;
    let context = parse_formula_list(hyps).map_err(|e| formula_err(1, "hypotheses", e))?;
    let conclusion: Formula = parse(concl).map_err(|e| formula_err(1, "conclusion", e))?;
    Ok(Judgment::new(context, conclusion))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_every_rule() {
        let src = "\
% sample
mode FIL
1. [] |- p | ~p ; taut
2. |- #[k, j] (p | ~p) ; nec [k, j] 1
3. a |> b |- a |> b ; assume % trailing
4. |- a |> b -> a |> b ; ded-out 3
5. a |> b |- a |> b ; ded-in 4
6. |- a |> b -> a |>[k] b ; ax RhdExtend
7. a |> b |- a |> b ; mp 5 4
8. a |> b |- a |> b ; p-rule [] [] k 7
";
        let d = parse_derivation(src).unwrap();
        assert_eq!(d.lines.len(), 8);
        assert_eq!(d.lines[1].justification, Justification::Nec(Label::from_vars(["k", "j"]).unwrap(), 1));
        assert_eq!(d.lines[5].justification, Justification::Ax(Schema::RhdExtend));
        let again = parse_derivation(&print_derivation(&d)).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_derivation("1 |- p ; taut").is_err());
        assert!(parse_derivation("1. |- p taut").is_err());
        assert!(parse_derivation("1. |- p ; frobnicate").is_err());
        assert!(parse_derivation("1. |- p ; mp 1").is_err());
        assert!(parse_derivation("1. |- p ; ax L7").is_err());
        assert!(parse_derivation("1. |- p & ; taut").is_err());
        assert!(parse_derivation("1. |- p ; taut\nmode ILP").is_err());
        let e = parse_derivation("\n\n1. |- p ; nec [k,k] 0").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn mode_directive() {
        let d = parse_derivation("mode ILP\n1. |- p -> p ; taut").unwrap();
        assert_eq!(d.mode, Mode::Ilp);
    }
}
