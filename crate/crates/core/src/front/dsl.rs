//! The `.obk` text format.
//!
//! ```text
//! # Σ₂: two unknots twisted around each other
//! handles: g
//! knot K1:
//! l0 l1 x0 x0 x0 x0
//! knot K2 orient -:
//! r1 r0
//! twists: K2 K1 K2 K1
//! ```
//!
//! Events: `l<slot>`, `r<slot>`, `x<slot>`, `h<slot>:<handle><+|->`. Knot headers name
//! the components in the order their first left cusps appear; events may span lines.
//! Twists are listed in application order, `^-1` marks a left-handed twist.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::diagram::{Event, FrontDiagram, KnotSpec};
use super::FrontError;

/// One Dehn twist in a monodromy word, referring to a knot by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRef {
    pub knot: String,
    pub exp: i8,
}

/// Parsed contents of an `.obk` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObkFile {
    pub front: FrontDiagram,
    pub twists: Vec<TwistRef>,
}

fn is_knot_name(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|c| c.is_ascii_alphabetic())
        && c.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> FrontError {
    FrontError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t))
}

fn parse_slot(tok: &str, line: usize, col: usize) -> Result<usize, FrontError> {
    tok.parse::<usize>()
        .map_err(|_| syntax(line, col, format!("bad slot index in {tok:?}")))
}

fn parse_event(tok: &str, line: usize, col: usize) -> Result<Event, FrontError> {
    let (kind, rest) = tok.split_at(tok.chars().next().map_or(0, char::len_utf8));
    match kind {
        "l" => Ok(Event::LeftCusp(parse_slot(rest, line, col)?)),
        "r" => Ok(Event::RightCusp(parse_slot(rest, line, col)?)),
        "x" => Ok(Event::Crossing(parse_slot(rest, line, col)?)),
        "h" => {
            let (slot, handle) = rest
                .split_once(':')
                .ok_or_else(|| syntax(line, col, format!("handle pass {tok:?} needs <slot>:<handle><+|->")))?;
            let slot = parse_slot(slot, line, col)?;
            let (name, dir) = if let Some(n) = handle.strip_suffix('+') {
                (n, 1)
            } else if let Some(n) = handle.strip_suffix('-') {
                (n, -1)
            } else {
                return Err(syntax(line, col, format!("handle pass {tok:?} needs a + or - direction")));
            };
            if !crate::words::is_generator_name(name) {
                return Err(syntax(line, col, format!("bad handle name {name:?}")));
            }
            Ok(Event::HandlePass {
                slot,
                handle: name.to_string(),
                dir,
            })
        }
        _ => Err(syntax(line, col, format!("unknown event {tok:?}"))),
    }
}

pub fn parse_obk(text: &str) -> Result<ObkFile, FrontError> {
    let mut handles: Option<Vec<String>> = None;
    let mut knots = Vec::new();
    let mut columns = Vec::new();
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut twists = Vec::new();
    let mut twist_spans = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        let body_col = |offset: usize| line[..indent + offset].chars().count() + 1;

        if let Some(rest) = trimmed.strip_prefix("handles:") {
            if handles.is_some() {
                return Err(syntax(line_no, 1, "repeated handles line"));
            }
            let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
            if let Some(bad) = names.iter().find(|n| !crate::words::is_generator_name(n)) {
                return Err(syntax(line_no, body_col(0), format!("bad handle name {bad:?}")));
            }
            handles = Some(names);
        } else if let Some(rest) = trimmed.strip_prefix("twists:") {
            let base = indent + "twists:".len();
            for (c, tok) in tokens(rest) {
                let (name, exp) = match tok.split_once('^') {
                    Some((n, "-1")) => (n, -1),
                    Some((n, "1" | "+1")) => (n, 1),
                    Some(_) => return Err(syntax(line_no, base + c, format!("bad twist exponent in {tok:?}"))),
                    None => (tok, 1),
                };
                if !is_knot_name(name) {
                    return Err(syntax(line_no, base + c, format!("bad knot name {name:?}")));
                }
                twists.push(TwistRef {
                    knot: name.to_string(),
                    exp,
                });
                twist_spans.push((line_no, base + c));
            }
        } else if let Some(rest) = trimmed.strip_prefix("knot") {
            let (header, events) = rest
                .split_once(':')
                .ok_or_else(|| syntax(line_no, body_col(0), "knot header needs a trailing ':'"))?;
            let parts: Vec<&str> = header.split_whitespace().collect();
            let (name, reversed) = match parts.as_slice() {
                [name] => (*name, false),
                [name, "orient", "-"] => (*name, true),
                [name, "orient", "+"] => (*name, false),
                _ => return Err(syntax(line_no, body_col(0), "expected `knot <name> [orient -]:`")),
            };
            if !is_knot_name(name) {
                return Err(syntax(line_no, body_col(0), format!("bad knot name {name:?}")));
            }
            knots.push(KnotSpec {
                name: name.to_string(),
                reversed,
            });
            let base = indent + "knot".len() + header.len() + 1;
            for (c, tok) in tokens(events) {
                columns.push(parse_event(tok, line_no, base + c)?);
                spans.push((line_no, base + c));
            }
        } else {
            for (c, tok) in tokens(line) {
                columns.push(parse_event(tok, line_no, c)?);
                spans.push((line_no, c));
            }
        }
    }

    let handles = handles.unwrap_or_else(|| {
        let mut seen: Vec<String> = Vec::new();
        for ev in &columns {
            if let Event::HandlePass { handle, .. } = ev {
                if !seen.contains(handle) {
                    seen.push(handle.clone());
                }
            }
        }
        seen
    });

    let front = FrontDiagram::new(handles, columns, knots).map_err(|e| e.locate(&spans))?;
    for (t, (line, col)) in twists.iter().zip(twist_spans) {
        if front.component_index(&t.knot).is_none() {
            return Err(FrontError::Validation {
                column: None,
                line: Some(line),
                col: Some(col),
                message: format!("twist along unknown knot {:?}", t.knot),
            });
        }
    }
    Ok(ObkFile { front, twists })
}

pub fn parse_front(text: &str) -> Result<FrontDiagram, FrontError> {
    parse_obk(text).map(|f| f.front)
}

fn event_token(ev: &Event) -> String {
    match ev {
        Event::LeftCusp(s) => format!("l{s}"),
        Event::RightCusp(s) => format!("r{s}"),
        Event::Crossing(s) => format!("x{s}"),
        Event::HandlePass { slot, handle, dir } => {
            format!("h{slot}:{handle}{}", if *dir > 0 { '+' } else { '-' })
        }
    }
}

/// Canonical text form; each knot header sits right before its component's first left cusp.
pub fn write_obk(file: &ObkFile) -> String {
    let front = &file.front;
    let mut out = String::new();
    if !front.handles().is_empty() {
        let _ = writeln!(out, "handles: {}", front.handles().join(" "));
    }
    let births: Vec<usize> = (0..front.component_count())
        .map(|c| front.analysis.cusps[front.analysis.components[c].first_left_cusp].column)
        .collect();
    let mut line: Vec<String> = Vec::new();
    for (col, ev) in front.columns().iter().enumerate() {
        if let Some(c) = births.iter().position(|&b| b == col) {
            if !line.is_empty() {
                let _ = writeln!(out, "{}", line.join(" "));
                line.clear();
            }
            let k = &front.knots()[c];
            let orient = if k.reversed { " orient -" } else { "" };
            let _ = writeln!(out, "knot {}{}:", k.name, orient);
        }
        line.push(event_token(ev));
    }
    if !line.is_empty() {
        let _ = writeln!(out, "{}", line.join(" "));
    }
    if !file.twists.is_empty() {
        let toks: Vec<String> = file
            .twists
            .iter()
            .map(|t| {
                if t.exp < 0 {
                    format!("{}^-1", t.knot)
                } else {
                    t.knot.clone()
                }
            })
            .collect();
        let _ = writeln!(out, "twists: {}", toks.join(" "));
    }
    out
}
