//! Plain-text models:
//!
//! ```text
//! worlds 3
//! R: 0 1
//! S 0: 1 1
//! val p: 1 2
//! ```
//!
//! `S w: u v` records `u S_w v`; `val p:` lists the worlds where `p` holds.
//! `%` starts a comment.

use std::fmt::Write;

use thiserror::Error;

use super::{bits, Frame, VeltmanModel, MAX_WORLDS};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("model line {line}: {message}")]
pub struct ModelParseError {
    pub line: usize,
    pub message: String,
}

pub fn print_model(m: &VeltmanModel) -> String {
    let fr = &m.frame;
    let mut out = format!("worlds {}\n", fr.n);
    for w in 0..fr.n {
        for u in bits(fr.r[w]) {
            let _ = writeln!(out, "R: {w} {u}");
        }
    }
    for w in 0..fr.n {
        for u in 0..fr.n {
            for v in bits(fr.s[w][u]) {
                let _ = writeln!(out, "S {w}: {u} {v}");
            }
        }
    }
    for (p, worlds) in &m.val {
        let ws: Vec<String> = bits(*worlds).map(|w| w.to_string()).collect();
        let _ = writeln!(out, "val {p}:{}{}", if ws.is_empty() { "" } else { " " }, ws.join(" "));
    }
    out
}

pub fn parse_model(text: &str) -> Result<VeltmanModel, ModelParseError> {
    let mut model: Option<VeltmanModel> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('%').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ModelParseError { line: i + 1, message };
        let Some(m) = model.as_mut() else {
            let n = line
                .strip_prefix("worlds")
                .and_then(|s| s.trim().parse::<usize>().ok())
                .filter(|n| (1..=MAX_WORLDS).contains(n))
                .ok_or_else(|| err(format!("expected `worlds N` with 1 <= N <= {MAX_WORLDS}")))?;
            model = Some(VeltmanModel::new(Frame::new(n)));
            continue;
        };
        let n = m.frame.n;
        let (head, rest) = line.split_once(':').ok_or_else(|| err("missing `:`".into()))?;
        let nums = |s: &str| -> Result<Vec<usize>, ModelParseError> {
            s.split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(w) if w < n => Ok(w),
                    _ => Err(err(format!("`{t}` is not a world below {n}"))),
                })
                .collect()
        };
        let head: Vec<&str> = head.split_whitespace().collect();
        match head.as_slice() {
            ["R"] => match nums(rest)?.as_slice() {
                [w, u] => m.frame.add_r(*w, *u),
                _ => return Err(err("R takes two worlds".into())),
            },
            ["S", w] => {
                let w = nums(w)?[0];
                match nums(rest)?.as_slice() {
                    [u, v] => m.frame.add_s(w, *u, *v),
                    _ => return Err(err("S takes two worlds".into())),
                }
            }
            ["val", p] => {
                let worlds = nums(rest)?.into_iter().fold(0u32, |acc, w| acc | 1 << w);
                *m.val.entry(p.to_string()).or_insert(0) |= worlds;
            }
            _ => return Err(err(format!("unknown entry `{}`", head.join(" ")))),
        }
    }
    model.ok_or(ModelParseError { line: 0, message: "empty model".into() })
}
