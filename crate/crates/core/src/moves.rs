//! Diagram moves on the abstract shadow `(word, tb, rot, Q, σ)` of an open book.
//!
//! Circles and handles are addressed by name, so scripts stay meaningful as circles
//! are added and removed. The stabilization credit `σ` counts stabilizations that a
//! later inverse Move I may remove; it is never inferred from `tb`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classify::{classify_trivial_monodromy, ContactClass};
use crate::page::{Circle, PageDiagram, Provenance};
use crate::twist::{OpenBook, Twist};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move")]
pub enum DiagMove {
    /// Double stabilization `S₊S₋`: tb −2.
    #[serde(rename = "moveI")]
    MoveI { circle: String },
    #[serde(rename = "moveI_inv")]
    MoveIInv { circle: String },
    /// Crossing change with `target`, or a self-crossing when `target` is `None`.
    #[serde(rename = "moveII")]
    MoveII {
        circle: String,
        #[serde(default)]
        target: Option<String>,
        sign: i8,
    },
    #[serde(rename = "slide2")]
    Slide2 {
        circle: String,
        over: String,
        sign: i8,
        #[serde(default = "Word::empty")]
        via: Word,
    },
    /// Substitutes `g ↦ g·h^sign` in every circle word.
    #[serde(rename = "slide1")]
    Slide1 { handle: String, by: String, sign: i8 },
    #[serde(rename = "invert")]
    InvertHandle { handle: String },
    /// New handle `g` cancelled by a new circle with word `g·w⁻¹`.
    #[serde(rename = "t2add")]
    T2Add {
        handle: String,
        word: Word,
        #[serde(default)]
        name: Option<String>,
    },
    #[serde(rename = "t2remove")]
    T2Remove { handle: String, circle: String },
    /// Unlinked max-tb unknot with rotation `rot`; with a twist this is stabilization.
    #[serde(rename = "addsummand")]
    AddSummand {
        rot: i64,
        #[serde(default)]
        twist: bool,
    },
    /// Legendrian push-off of a circle, with the same (`+`) or opposite (`-`) orientation.
    #[serde(rename = "double")]
    Double { circle: String, sign: i8 },
    #[serde(rename = "flip")]
    Flip { circle: String },
}

fn sign_char(s: i8) -> char {
    if s < 0 {
        '-'
    } else {
        '+'
    }
}

impl fmt::Display for DiagMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagMove::MoveI { circle } => write!(f, "moveI {circle}"),
            DiagMove::MoveIInv { circle } => write!(f, "moveI_inv {circle}"),
            DiagMove::MoveII { circle, target, sign } => {
                write!(f, "moveII {circle} {} {}", target.as_deref().unwrap_or("self"), sign_char(*sign))
            }
            DiagMove::Slide2 { circle, over, sign, via } => {
                write!(f, "slide2 {circle} over {over} {}", sign_char(*sign))?;
                if !via.is_empty() {
                    write!(f, " via {via}")?;
                }
                Ok(())
            }
            DiagMove::Slide1 { handle, by, sign } => write!(f, "slide1 {handle} by {by} {}", sign_char(*sign)),
            DiagMove::InvertHandle { handle } => write!(f, "invert {handle}"),
            DiagMove::T2Add { handle, word, name } => {
                write!(f, "t2add {handle} {word}")?;
                if let Some(n) = name {
                    write!(f, " as {n}")?;
                }
                Ok(())
            }
            DiagMove::T2Remove { handle, circle } => write!(f, "t2remove {handle} {circle}"),
            DiagMove::AddSummand { rot, twist } => {
                write!(f, "addsummand rot={rot}")?;
                if *twist {
                    write!(f, " twist")?;
                }
                Ok(())
            }
            DiagMove::Double { circle, sign } => write!(f, "double {circle} {}", sign_char(*sign)),
            DiagMove::Flip { circle } => write!(f, "flip {circle}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("linking undefined: {0}")]
    UndefinedLinking(String),
    #[error("script syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
}

impl MoveError {
    pub fn exit_code(&self) -> i32 {
        match self {
            MoveError::IllegalMove(_) => crate::exit::ILLEGAL_MOVE,
            MoveError::UndefinedLinking(_) => crate::exit::UNSUPPORTED,
            MoveError::Syntax { .. } => crate::exit::SYNTAX,
        }
    }
}

fn illegal<T>(msg: impl Into<String>) -> Result<T, MoveError> {
    Err(MoveError::IllegalMove(msg.into()))
}

fn parse_sign(tok: &str, line: usize) -> Result<i8, MoveError> {
    match tok {
        "+" | "+1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(MoveError::Syntax {
            line,
            message: format!("expected + or -, got {tok:?}"),
        }),
    }
}

impl DiagMove {
    /// Parses one line of the text script format, e.g. `slide2 K1 over K2 +`.
    pub fn parse_line(text: &str, line: usize) -> Result<DiagMove, MoveError> {
        let syn = |m: String| MoveError::Syntax { line, message: m };
        let toks: Vec<&str> = text.split_whitespace().collect();
        let word = |ts: &[&str]| Word::parse(&ts.join(" ")).map_err(|e| syn(e.to_string()));
        let m = match toks.as_slice() {
            ["moveI", c] => DiagMove::MoveI { circle: c.to_string() },
            ["moveI_inv" | "moveI^-1", c] => DiagMove::MoveIInv { circle: c.to_string() },
            ["moveII", c, t, s] => DiagMove::MoveII {
                circle: c.to_string(),
                target: (*t != "self").then(|| t.to_string()),
                sign: parse_sign(s, line)?,
            },
            ["slide2", c, "over", o, s, rest @ ..] => {
                let via = match rest {
                    [] => Word::empty(),
                    ["via", w @ ..] if !w.is_empty() => word(w)?,
                    _ => return Err(syn(format!("unexpected trailing tokens in {text:?}"))),
                };
                DiagMove::Slide2 {
                    circle: c.to_string(),
                    over: o.to_string(),
                    sign: parse_sign(s, line)?,
                    via,
                }
            }
            ["slide1", g, "by", h, s] => DiagMove::Slide1 {
                handle: g.to_string(),
                by: h.to_string(),
                sign: parse_sign(s, line)?,
            },
            ["invert", g] => DiagMove::InvertHandle { handle: g.to_string() },
            ["t2add", g, rest @ ..] if !rest.is_empty() => {
                let (w, name) = match rest.iter().position(|t| *t == "as") {
                    Some(p) if p + 2 == rest.len() => (&rest[..p], Some(rest[p + 1].to_string())),
                    Some(_) => return Err(syn("expected `as <name>` at the end".into())),
                    None => (rest, None),
                };
                DiagMove::T2Add {
                    handle: g.to_string(),
                    word: word(w)?,
                    name,
                }
            }
            ["t2remove", g, c] => DiagMove::T2Remove {
                handle: g.to_string(),
                circle: c.to_string(),
            },
            ["addsummand", r, rest @ ..] => {
                let rot = r
                    .strip_prefix("rot=")
                    .and_then(|v| v.parse::<i64>().ok())
                    .ok_or_else(|| syn(format!("expected rot=<n>, got {r:?}")))?;
                let twist = match rest {
                    [] => false,
                    ["twist"] => true,
                    _ => return Err(syn(format!("unexpected trailing tokens in {text:?}"))),
                };
                DiagMove::AddSummand { rot, twist }
            }
            ["double", c, s] => DiagMove::Double {
                circle: c.to_string(),
                sign: parse_sign(s, line)?,
            },
            ["flip", c] => DiagMove::Flip { circle: c.to_string() },
            _ => return Err(syn(format!("unrecognized move {text:?}"))),
        };
        Ok(m)
    }
}

/// Parses a script: one move per line, `#` comments; or a JSON array of moves.
pub fn parse_script(text: &str) -> Result<Vec<DiagMove>, MoveError> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(text).map_err(|e| MoveError::Syntax {
            line: e.line(),
            message: e.to_string(),
        });
    }
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            out.push(DiagMove::parse_line(line, i + 1)?);
        }
    }
    Ok(out)
}

pub fn write_script(moves: &[DiagMove]) -> String {
    moves.iter().map(|m| format!("{m}\n")).collect()
}

/// Mutable working copy of a book.
struct State {
    handles: Vec<String>,
    circles: Vec<Circle>,
    lk: BTreeMap<(usize, usize), i64>,
    mono: Vec<Twist>,
    provenance: Provenance,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

impl State {
    fn of(b: &OpenBook) -> Self {
        let provenance = b.page().provenance();
        let (page, mono) = b.clone().into_parts();
        let (handles, circles, lk) = page.into_parts();
        State {
            handles,
            circles,
            lk,
            mono,
            provenance,
        }
    }

    fn finish(self) -> Result<OpenBook, MoveError> {
        let page = PageDiagram::with_provenance(self.handles, self.circles, self.lk, self.provenance)
            .map_err(|e| MoveError::IllegalMove(format!("result is not a valid page: {e}")))?;
        OpenBook::new(page, self.mono).map_err(|e| MoveError::IllegalMove(format!("result is not a valid book: {e}")))
    }

    fn circle(&self, name: &str) -> Result<usize, MoveError> {
        self.circles
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| MoveError::IllegalMove(format!("no circle named {name:?}")))
    }

    fn handle(&self, name: &str) -> Result<usize, MoveError> {
        self.handles
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| MoveError::IllegalMove(format!("no handle named {name:?}")))
    }

    fn null(&self, i: usize) -> bool {
        self.circles[i].is_null_homologous(&self.handles)
    }

    fn q(&self, i: usize, j: usize) -> Option<i64> {
        if i == j {
            Some(self.circles[i].tb - 1)
        } else {
            self.lk.get(&key(i, j)).copied()
        }
    }

    fn q_required(&self, i: usize, j: usize) -> Result<i64, MoveError> {
        self.q(i, j).ok_or_else(|| {
            MoveError::UndefinedLinking(format!(
                "between {:?} and {:?}",
                self.circles[i].name, self.circles[j].name
            ))
        })
    }

    fn untwisted(&self, i: usize) -> Result<(), MoveError> {
        if self.mono.iter().any(|t| t.circle == i) {
            illegal(format!(
                "the monodromy twists along {:?}, so the handle is not fixed by it",
                self.circles[i].name
            ))
        } else {
            Ok(())
        }
    }

    fn trivial_monodromy(&self, what: &str) -> Result<(), MoveError> {
        if self.mono.is_empty() {
            Ok(())
        } else {
            illegal(format!("{what} requires trivial monodromy"))
        }
    }

    fn check_word_handles(&self, w: &Word) -> Result<(), MoveError> {
        match w.letters().iter().find(|l| !self.handles.contains(&l.gen)) {
            Some(l) => illegal(format!("word uses unknown handle {:?}", l.gen)),
            None => Ok(()),
        }
    }

    fn fresh_circle(&self, prefix: &str) -> String {
        (1..)
            .map(|n| format!("{prefix}{n}"))
            .find(|c| self.circles.iter().all(|o| o.name != *c))
            .expect("unbounded name supply")
    }

    /// Appends a circle; entries of `links` give its linking with existing circles.
    fn push_circle(&mut self, c: Circle, links: impl Fn(&State, usize) -> Option<i64>) -> Result<usize, MoveError> {
        let new = self.circles.len();
        self.circles.push(c);
        if self.null(new) {
            for k in 0..new {
                if self.null(k) {
                    let v = links(self, k).ok_or_else(|| {
                        MoveError::UndefinedLinking(format!(
                            "new circle against {:?}",
                            self.circles[k].name
                        ))
                    })?;
                    self.lk.insert((k, new), v);
                }
            }
        }
        Ok(new)
    }

    fn remove_circle(&mut self, c: usize) {
        self.circles.remove(c);
        let old = std::mem::take(&mut self.lk);
        let shift = |x: usize| if x > c { x - 1 } else { x };
        self.lk = old
            .into_iter()
            .filter(|((i, j), _)| *i != c && *j != c)
            .map(|((i, j), v)| ((shift(i), shift(j)), v))
            .collect();
        for t in &mut self.mono {
            t.circle = shift(t.circle);
        }
    }

    /// Substitutes into all words; circle null-homology must not be gained.
    fn substitute_all(&mut self, g: &str, w: &Word) -> Result<(), MoveError> {
        let before: Vec<bool> = (0..self.circles.len()).map(|i| self.null(i)).collect();
        for c in &mut self.circles {
            c.word = c.word.substitute(g, w);
        }
        for (i, was) in before.into_iter().enumerate() {
            if !was && self.null(i) {
                return Err(MoveError::UndefinedLinking(format!(
                    "circle {:?} becomes null-homologous and needs linking numbers",
                    self.circles[i].name
                )));
            }
        }
        Ok(())
    }
}

fn check_sign(s: i8) -> Result<(), MoveError> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        illegal(format!("sign must be +1 or -1, got {s}"))
    }
}

pub fn apply_move(b: &OpenBook, m: &DiagMove) -> Result<OpenBook, MoveError> {
    let mut s = State::of(b);
    match m {
        DiagMove::MoveI { circle } => {
            let i = s.circle(circle)?;
            s.untwisted(i)?;
            s.circles[i].tb -= 2;
            s.circles[i].sigma += 1;
        }
        DiagMove::MoveIInv { circle } => {
            let i = s.circle(circle)?;
            s.untwisted(i)?;
            if s.circles[i].sigma == 0 {
                return illegal(format!("no recorded stabilization on {circle:?} to remove"));
            }
            s.circles[i].tb += 2;
            s.circles[i].sigma -= 1;
        }
        DiagMove::MoveII { circle, target, sign } => {
            check_sign(*sign)?;
            let i = s.circle(circle)?;
            s.untwisted(i)?;
            match target {
                Some(t) => {
                    let j = s.circle(t)?;
                    if i == j {
                        return illegal("use `self` for a self-crossing change");
                    }
                    s.untwisted(j)?;
                    let q = s.q_required(i, j)?;
                    s.lk.insert(key(i, j), q + i64::from(*sign));
                    s.circles[i].tb -= 4;
                }
                None => s.circles[i].tb += 2 * i64::from(*sign) - 4,
            }
            s.circles[i].sigma += 2;
        }
        DiagMove::Slide2 { circle, over, sign, via } => {
            check_sign(*sign)?;
            s.trivial_monodromy("a 2-handle slide")?;
            let i = s.circle(circle)?;
            let j = s.circle(over)?;
            if i == j {
                return illegal("a circle cannot slide over itself");
            }
            s.check_word_handles(via)?;
            let eps = i64::from(*sign);
            let qij = s.q_required(i, j)?;
            let qjj = s.circles[j].tb - 1;
            let qii = s.circles[i].tb - 1;
            let row: Vec<Option<i64>> = (0..s.circles.len())
                .map(|k| match (s.q(i, k), s.q(j, k)) {
                    (Some(a), Some(b)) => Some(a + eps * b),
                    _ => None,
                })
                .collect();
            let wj = s.circles[j].word.pow(i32::from(*sign));
            let new_word = s.circles[i].word.concat(via).concat(&wj).concat(&via.inverse()).free_reduce();
            s.circles[i].word = new_word;
            s.circles[i].tb = qii + 2 * eps * qij + qjj + 1;
            s.circles[i].rot += eps * s.circles[j].rot;
            let null_i = s.null(i);
            for k in 0..s.circles.len() {
                if k == i {
                    continue;
                }
                s.lk.remove(&key(i, k));
                if null_i && s.null(k) {
                    let v = row[k].ok_or_else(|| {
                        MoveError::UndefinedLinking(format!(
                            "slid circle against {:?}",
                            s.circles[k].name
                        ))
                    })?;
                    s.lk.insert(key(i, k), v);
                }
            }
        }
        DiagMove::Slide1 { handle, by, sign } => {
            check_sign(*sign)?;
            s.handle(handle)?;
            s.handle(by)?;
            if handle == by {
                return illegal("a 1-handle cannot slide over itself");
            }
            let w = Word::generator(handle.clone()).concat(&Word::generator(by.clone()).pow(i32::from(*sign)));
            s.substitute_all(handle, &w)?;
        }
        DiagMove::InvertHandle { handle } => {
            s.handle(handle)?;
            s.substitute_all(handle, &Word::generator(handle.clone()).inverse())?;
        }
        DiagMove::T2Add { handle, word, name } => {
            if s.handles.contains(handle) {
                return illegal(format!("handle {handle:?} already exists"));
            }
            if !crate::words::is_generator_name(handle) {
                return illegal(format!("bad handle name {handle:?}"));
            }
            s.check_word_handles(word)?;
            let name = match name {
                Some(n) if s.circles.iter().any(|c| c.name == *n) => {
                    return illegal(format!("circle {n:?} already exists"))
                }
                Some(n) => n.clone(),
                None => s.fresh_circle("C"),
            };
            s.handles.push(handle.clone());
            let c = Circle {
                name,
                word: Word::generator(handle.clone()).concat(&word.inverse()).free_reduce(),
                tb: -1,
                rot: 0,
                sigma: 0,
            };
            s.push_circle(c, |_, _| None)?;
        }
        DiagMove::T2Remove { handle, circle } => {
            s.trivial_monodromy("cancelling a handle pair")?;
            let h = s.handle(handle)?;
            let c = s.circle(circle)?;
            let letters = s.circles[c].word.letters();
            let first_is_g = letters.first().is_some_and(|l| l.gen == *handle && l.exp == 1);
            let w = if first_is_g {
                Word::from_letters(letters[1..].to_vec()).inverse()
            } else {
                return illegal(format!("circle {circle:?} is not of the form {handle}·w⁻¹"));
            };
            if w.mentions(handle) {
                return illegal(format!("{handle} occurs in w, so the pair does not cancel"));
            }
            s.remove_circle(c);
            s.handles.remove(h);
            s.substitute_all(handle, &w)?;
        }
        DiagMove::AddSummand { rot, twist } => {
            if *twist && *rot != 0 {
                return illegal("only the rot = 0 unknot carries a twisted summand");
            }
            let name = s.fresh_circle("U");
            let new = s.push_circle(Circle::unknot(name, *rot), |_, _| Some(0))?;
            if *twist {
                s.mono.push(Twist::right(new));
            }
        }
        DiagMove::Double { circle, sign } => {
            check_sign(*sign)?;
            s.trivial_monodromy("doubling a relation")?;
            let i = s.circle(circle)?;
            let src = s.circles[i].clone();
            let eps = i64::from(*sign);
            let c = Circle {
                name: s.fresh_circle(&format!("{}_", src.name)),
                word: src.word.pow(i32::from(*sign)),
                tb: src.tb,
                rot: eps * src.rot,
                sigma: 0,
            };
            s.push_circle(c, move |st, k| {
                if k == i {
                    Some(eps * src.tb)
                } else {
                    st.q(i, k).map(|v| eps * v)
                }
            })?;
        }
        DiagMove::Flip { circle } => {
            let i = s.circle(circle)?;
            s.circles[i].rot = -s.circles[i].rot;
            s.circles[i].word = s.circles[i].word.inverse();
            for (&(a, b), v) in s.lk.iter_mut() {
                if a == i || b == i {
                    *v = -*v;
                }
            }
        }
    }
    s.finish()
}

/// One applied move with the fields it changed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveStep {
    #[serde(rename = "move")]
    pub mv: DiagMove,
    pub changes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ContactClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveLog {
    pub initial: OpenBook,
    pub steps: Vec<MoveStep>,
}

impl MoveLog {
    /// Re-applies the logged moves to the logged initial book.
    pub fn replay(&self) -> Result<OpenBook, MoveError> {
        self.steps.iter().try_fold(self.initial.clone(), |b, s| apply_move(&b, &s.mv))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {} failed: {error}", .step + 1)]
pub struct ScriptError {
    /// 0-based index of the failing move.
    pub step: usize,
    pub error: MoveError,
    /// Steps applied before the failure.
    pub log: MoveLog,
}

fn snapshot(b: &OpenBook) -> Option<ContactClass> {
    if b.has_trivial_word() && !b.page().has_one_handles() {
        classify_trivial_monodromy(b.page()).ok()
    } else {
        None
    }
}

pub fn run_script(b: &OpenBook, script: &[DiagMove]) -> Result<(OpenBook, MoveLog), Box<ScriptError>> {
    let mut log = MoveLog {
        initial: b.clone(),
        steps: Vec::new(),
    };
    let mut cur = b.clone();
    for (k, m) in script.iter().enumerate() {
        match apply_move(&cur, m) {
            Ok(next) => {
                log.steps.push(MoveStep {
                    mv: m.clone(),
                    changes: describe_changes(&cur, &next),
                    classification: snapshot(&next),
                });
                cur = next;
            }
            Err(error) => return Err(Box::new(ScriptError { step: k, error, log })),
        }
    }
    Ok((cur, log))
}

/// Field-by-field differences between two books, keyed by circle name.
pub fn describe_changes(before: &OpenBook, after: &OpenBook) -> Vec<String> {
    let mut out = Vec::new();
    let (pb, pa) = (before.page(), after.page());
    if pb.handles() != pa.handles() {
        out.push(format!("handles: {:?} -> {:?}", pb.handles(), pa.handles()));
    }
    for c in pb.circles() {
        match pa.circles().iter().find(|o| o.name == c.name) {
            None => out.push(format!("{}: removed", c.name)),
            Some(o) => {
                if c.word != o.word {
                    out.push(format!("{}.word: {} -> {}", c.name, c.word, o.word));
                }
                if c.tb != o.tb {
                    out.push(format!("{}.tb: {} -> {}", c.name, c.tb, o.tb));
                }
                if c.rot != o.rot {
                    out.push(format!("{}.rot: {} -> {}", c.name, c.rot, o.rot));
                }
                if c.sigma != o.sigma {
                    out.push(format!("{}.sigma: {} -> {}", c.name, c.sigma, o.sigma));
                }
            }
        }
    }
    for o in pa.circles() {
        if pb.circle_index(&o.name).is_none() {
            out.push(format!(
                "{}: added (word {}, tb {}, rot {})",
                o.name, o.word, o.tb, o.rot
            ));
        }
    }
    let qb = named_linking(pb);
    let qa = named_linking(pa);
    for (k, v) in &qa {
        if qb.get(k) != Some(v) {
            let old = qb.get(k).map_or("undefined".to_string(), |x| x.to_string());
            out.push(format!("lk({},{}): {} -> {}", k.0, k.1, old, v));
        }
    }
    for k in qb.keys() {
        if !qa.contains_key(k) && pa.circle_index(&k.0).is_some() && pa.circle_index(&k.1).is_some() {
            out.push(format!("lk({},{}): undefined", k.0, k.1));
        }
    }
    if before.word_string() != after.word_string() {
        out.push(format!("monodromy: {} -> {}", before.word_string(), after.word_string()));
    }
    out
}

/// Linking numbers keyed by ordered circle-name pairs.
fn named_linking(p: &PageDiagram) -> BTreeMap<(String, String), i64> {
    let names: Vec<&String> = p.circles().iter().map(|c| &c.name).collect();
    p.linking_entries()
        .iter()
        .map(|(&(i, j), &v)| {
            let (a, b) = (names[i].clone(), names[j].clone());
            (if a <= b { (a, b) } else { (b, a) }, v)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractReport {
    pub passed: bool,
    pub violations: Vec<String>,
}

/// Checks `after` against the transformation table for `m` without running the move.
/// Every field not named in the table must be unchanged.
pub fn check_contract(before: &OpenBook, after: &OpenBook, m: &DiagMove) -> ContractReport {
    let mut v = Vec::new();
    let pb = before.page();
    let pa = after.page();
    let lk_b = named_linking(pb);
    let lk_a = named_linking(pa);
    let lk = |map: &BTreeMap<(String, String), i64>, p: &PageDiagram, a: &str, b: &str| -> Option<i64> {
        if a == b {
            return p.circle_index(a).map(|i| p.circles()[i].tb - 1);
        }
        let k = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        map.get(&k).copied()
    };

    // Expected per-circle fields, expected new circles, and removed circle.
    let mut expect: BTreeMap<String, Circle> = pb.circles().iter().map(|c| (c.name.clone(), c.clone())).collect();
    let mut expect_handles: Vec<String> = pb.handles().to_vec();
    let mut touched: Vec<String> = Vec::new();
    let mut expect_extra_twist = false;
    let mut removed: Option<String> = None;
    let mut expected_lk: BTreeMap<(String, String), Option<i64>> = BTreeMap::new();
    let mut set_lk = |a: &str, b: &str, val: Option<i64>| {
        let k = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        expected_lk.insert(k, val);
    };
    let new_circles: Vec<&Circle> = pa.circles().iter().filter(|c| pb.circle_index(&c.name).is_none()).collect();

    match m {
        DiagMove::MoveI { circle } | DiagMove::MoveIInv { circle } => {
            if let Some(c) = expect.get_mut(circle) {
                let inv = matches!(m, DiagMove::MoveIInv { .. });
                c.tb += if inv { 2 } else { -2 };
                c.sigma = if inv { c.sigma.wrapping_sub(1) } else { c.sigma + 1 };
            }
        }
        DiagMove::MoveII { circle, target, sign } => {
            if let Some(c) = expect.get_mut(circle) {
                c.sigma += 2;
                c.tb += match target {
                    Some(_) => -4,
                    None => 2 * i64::from(*sign) - 4,
                };
            }
            if let Some(t) = target {
                let old = lk(&lk_b, pb, circle, t);
                set_lk(circle, t, old.map(|x| x + i64::from(*sign)));
            }
        }
        DiagMove::Slide2 { circle, over, sign, via } => {
            let eps = i64::from(*sign);
            if let (Some(ci), Some(cj)) = (pb.circle_index(circle), pb.circle_index(over)) {
                let (ki, kj) = (&pb.circles()[ci], &pb.circles()[cj]);
                let qij = lk(&lk_b, pb, circle, over).unwrap_or(0);
                let word = ki.word.mul(via).mul(&kj.word.pow(i32::from(*sign))).mul(&via.inverse());
                let e = expect.get_mut(circle).expect("indexed above");
                e.word = word;
                e.rot = ki.rot + eps * kj.rot;
                // Q'_ii = Q_ii + 2ε Q_ij + Q_jj
                e.tb = (ki.tb - 1) + 2 * eps * qij + (kj.tb - 1) + 1;
                let null_new = pb.handles().iter().all(|h| e.word.exponent_sum(h) == 0);
                for k in pb.circles() {
                    if k.name == *circle {
                        continue;
                    }
                    let val = if null_new && k.is_null_homologous(pb.handles()) {
                        match (lk(&lk_b, pb, circle, &k.name), lk(&lk_b, pb, over, &k.name)) {
                            (Some(a), Some(b)) => Some(a + eps * b),
                            _ => None,
                        }
                    } else {
                        None
                    };
                    set_lk(circle, &k.name, val);
                }
            }
        }
        DiagMove::Slide1 { handle, by, sign } => {
            let w = Word::generator(handle.clone()).concat(&Word::generator(by.clone()).pow(i32::from(*sign)));
            for c in expect.values_mut() {
                c.word = c.word.substitute(handle, &w);
            }
        }
        DiagMove::InvertHandle { handle } => {
            let w = Word::generator(handle.clone()).inverse();
            for c in expect.values_mut() {
                c.word = c.word.substitute(handle, &w);
            }
        }
        DiagMove::T2Add { handle, word, .. } => {
            expect_handles.push(handle.clone());
            match new_circles.as_slice() {
                [c] => {
                    let w = Word::generator(handle.clone()).mul(&word.inverse());
                    if c.word != w || c.tb != -1 || c.rot != 0 {
                        v.push(format!("new circle {} is not (word {w}, tb -1, rot 0)", c.name));
                    }
                    touched.push(c.name.clone());
                }
                _ => v.push(format!("expected exactly one new circle, found {}", new_circles.len())),
            }
        }
        DiagMove::T2Remove { handle, circle } => {
            expect_handles.retain(|h| h != handle);
            if let Some(c) = expect.remove(circle) {
                let w = Word::from_letters(c.word.letters().iter().skip(1).cloned().collect()).inverse();
                for o in expect.values_mut() {
                    o.word = o.word.substitute(handle, &w);
                }
            }
            removed = Some(circle.clone());
        }
        DiagMove::AddSummand { rot, twist } => {
            match new_circles.as_slice() {
                [c] => {
                    if !c.word.is_empty() || c.tb != -1 - rot.abs() || c.rot != *rot {
                        v.push(format!("new circle {} is not the unknot with rot {rot}", c.name));
                    }
                    for k in pb.circles() {
                        if k.is_null_homologous(pb.handles()) && lk(&lk_a, pa, &c.name, &k.name) != Some(0) {
                            v.push(format!("new circle {} is linked with {}", c.name, k.name));
                        }
                    }
                    touched.push(c.name.clone());
                }
                _ => v.push(format!("expected exactly one new circle, found {}", new_circles.len())),
            }
            expect_extra_twist = *twist;
        }
        DiagMove::Double { circle, sign } => {
            let eps = i64::from(*sign);
            match (new_circles.as_slice(), pb.circle_index(circle)) {
                ([c], Some(i)) => {
                    let src = &pb.circles()[i];
                    if c.word != src.word.pow(i32::from(*sign)) || c.tb != src.tb || c.rot != eps * src.rot {
                        v.push(format!("new circle {} is not a push-off of {circle}", c.name));
                    }
                    if src.is_null_homologous(pb.handles()) {
                        if lk(&lk_a, pa, &c.name, circle) != Some(eps * src.tb) {
                            v.push(format!("lk({},{circle}) should be {}", c.name, eps * src.tb));
                        }
                        for k in pb.circles() {
                            if k.name != *circle && k.is_null_homologous(pb.handles()) {
                                let want = lk(&lk_b, pb, circle, &k.name).map(|x| eps * x);
                                if lk(&lk_a, pa, &c.name, &k.name) != want {
                                    v.push(format!("lk({},{}) should copy row {circle}", c.name, k.name));
                                }
                            }
                        }
                    }
                    touched.push(c.name.clone());
                }
                _ => v.push("expected exactly one new circle".into()),
            }
        }
        DiagMove::Flip { circle } => {
            if let Some(c) = expect.get_mut(circle) {
                c.rot = -c.rot;
                c.word = c.word.inverse();
            }
            for k in pb.circles() {
                if k.name != *circle {
                    let old = lk(&lk_b, pb, circle, &k.name);
                    set_lk(circle, &k.name, old.map(|x| -x));
                }
            }
        }
    }

    if pa.handles() != expect_handles.as_slice() {
        v.push(format!("handles: expected {expect_handles:?}, got {:?}", pa.handles()));
    }
    for (name, e) in &expect {
        match pa.circle_index(name) {
            None => v.push(format!("{name}: missing after move")),
            Some(i) => {
                let a = &pa.circles()[i];
                if a.word.free_reduce() != e.word.free_reduce() {
                    v.push(format!("{name}.word: expected {}, got {}", e.word, a.word));
                }
                if a.tb != e.tb {
                    v.push(format!("{name}.tb: expected {}, got {}", e.tb, a.tb));
                }
                if a.rot != e.rot {
                    v.push(format!("{name}.rot: expected {}, got {}", e.rot, a.rot));
                }
                if a.sigma != e.sigma {
                    v.push(format!("{name}.sigma: expected {}, got {}", e.sigma, a.sigma));
                }
            }
        }
    }
    if let Some(r) = &removed {
        if pa.circle_index(r).is_some() {
            v.push(format!("{r}: should have been removed"));
        }
    }
    for c in &new_circles {
        if !touched.contains(&c.name) {
            v.push(format!("{}: unexpected new circle", c.name));
        }
    }
    // Linking among circles that existed before.
    let old_names: Vec<&String> = expect.keys().collect();
    for (x, a) in old_names.iter().enumerate() {
        for b in &old_names[x + 1..] {
            let k = ((*a).clone(), (*b).clone());
            let want = match expected_lk.get(&k) {
                Some(w) => *w,
                None => lk_b.get(&k).copied(),
            };
            let got = lk_a.get(&k).copied();
            let defined_after = [a, b].iter().all(|n| {
                pa.circle_index(n)
                    .is_some_and(|i| pa.is_null_homologous(i))
            });
            if defined_after && got != want {
                v.push(format!("lk({a},{b}): expected {want:?}, got {got:?}"));
            }
        }
    }
    // Monodromy, by circle name.
    let names_b: Vec<String> = before
        .monodromy()
        .iter()
        .map(|t| format!("{}^{}", pb.circles()[t.circle].name, t.exp))
        .collect();
    let names_a: Vec<String> = after
        .monodromy()
        .iter()
        .map(|t| format!("{}^{}", pa.circles()[t.circle].name, t.exp))
        .collect();
    let mut want = names_b.clone();
    if expect_extra_twist {
        if let [c] = new_circles.as_slice() {
            want.push(format!("{}^1", c.name));
        }
    }
    if names_a != want {
        v.push(format!("monodromy: expected {want:?}, got {names_a:?}"));
    }
    ContractReport {
        passed: v.is_empty(),
        violations: v,
    }
}
