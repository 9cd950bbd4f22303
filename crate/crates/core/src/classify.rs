//! Recognition of the simply connected contact 5-manifolds given by the diagrams:
//! subcritically fillable ones from `(m, d)`, Barden summands from `H₂`, the family
//! `N_k`, and checking of stable-equivalence certificates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::moves::{apply_move, DiagMove, MoveError};
use crate::page::PageDiagram;
use crate::twist::{open_book_homology, OpenBook, Spin, TwistError};
use crate::zalg::{gl_orbit_invariant, prime_power_factors, AbelianGroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ClassKind {
    Sphere,
    SBundleSum { m: usize, d: u64 },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContactClass {
    #[serde(flatten)]
    pub kind: ClassKind,
    pub diffeo_name: String,
    pub contact_name: String,
}

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn subscript(n: impl ToString) -> String {
    n.to_string()
        .chars()
        .map(|c| c.to_digit(10).map_or(c, |d| SUBSCRIPTS[d as usize]))
        .collect()
}

/// `ξ_d` with a subscript numeral.
pub fn xi_name(d: u64) -> String {
    format!("ξ{}", subscript(d))
}

/// Diffeomorphism type of `OB(Σ, id)` for a page with `m` circles and rot-gcd `d`.
pub fn bundle_sum_name(m: usize, d: u64) -> String {
    match (m, d.is_multiple_of(2)) {
        (0, _) => "S⁵".into(),
        (1, true) => "S²×S³".into(),
        (1, false) => "S²×̃S³".into(),
        (2, false) => "S²×S³ # S²×̃S³".into(),
        (_, true) => format!("#_{m} S²×S³"),
        (_, false) => format!("#_{}(S²×S³) # S²×̃S³", m - 1),
    }
}

impl ContactClass {
    pub fn sphere() -> Self {
        ContactClass {
            kind: ClassKind::Sphere,
            diffeo_name: "S⁵".into(),
            contact_name: "ξ_std".into(),
        }
    }

    pub fn bundle_sum(m: usize, d: u64) -> Self {
        if m == 0 {
            return Self::sphere();
        }
        ContactClass {
            kind: ClassKind::SBundleSum { m, d },
            diffeo_name: bundle_sum_name(m, d),
            contact_name: xi_name(d),
        }
    }
}

/// `OB(Σ, id)` is determined by the number of 2-handles and the `GL(m, Z)`-orbit of
/// `c₁`, which is the gcd of the rotation numbers.
pub fn classify_trivial_monodromy(p: &PageDiagram) -> Result<ContactClass, ClassifyError> {
    if p.has_one_handles() {
        return Err(ClassifyError::Unsupported(
            "classification needs a page without 1-handles".into(),
        ));
    }
    let rot: Vec<BigInt> = p.circles().iter().map(|c| BigInt::from(c.rot)).collect();
    let d = gl_orbit_invariant(&rot).first().cloned().unwrap_or_default();
    let d = d
        .to_u64()
        .ok_or_else(|| ClassifyError::Unsupported("rotation gcd out of range".into()))?;
    Ok(ContactClass::bundle_sum(p.circle_count(), d))
}

/// Classification of a book. Trivial monodromy goes through
/// [`classify_trivial_monodromy`]; otherwise only the diffeomorphism type is named,
/// and only when the manifold is spin and Barden-realizable.
pub fn classify_book(b: &OpenBook) -> Result<ContactClass, ClassifyError> {
    if b.has_trivial_word() {
        return classify_trivial_monodromy(b.page());
    }
    if b.page().has_one_handles() {
        return Err(ClassifyError::Unsupported(
            "classification needs a page without 1-handles".into(),
        ));
    }
    let h = open_book_homology(b)?;
    let diffeo_name = match h.spin {
        Spin::Yes => barden_decompose(&h.h2, true)
            .map(|bd| bd.name())
            .unwrap_or_else(|_| "unknown".into()),
        _ => "unknown".into(),
    };
    Ok(ContactClass {
        kind: ClassKind::Unknown,
        diffeo_name,
        contact_name: "unknown".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BardenDecomposition {
    pub free_summands: usize,
    /// Prime powers `p^j`, one per `M_{p^j}` summand, ascending.
    pub mk_factors: Vec<BigInt>,
    /// One free summand is the nontrivial bundle `S²×̃S³`.
    pub tilde: bool,
}

impl BardenDecomposition {
    pub fn reassemble(&self) -> AbelianGroup {
        let mut orders = Vec::new();
        for f in &self.mk_factors {
            orders.push(f.clone());
            orders.push(f.clone());
        }
        AbelianGroup::from_cyclic_orders(orders).sum(&AbelianGroup::free(self.free_summands))
    }

    /// E.g. `S²×S³ # M₃`, `M₂ # M₃`, `S⁵`.
    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        let plain = self.free_summands - usize::from(self.tilde);
        match plain {
            0 => {}
            1 => parts.push("S²×S³".to_string()),
            n => parts.push(format!("#_{n} S²×S³")),
        }
        if self.tilde {
            parts.push("S²×̃S³".into());
        }
        for f in &self.mk_factors {
            parts.push(format!("M{}", subscript(f)));
        }
        if parts.is_empty() {
            "S⁵".into()
        } else {
            parts.join(" # ")
        }
    }
}

/// Splits `H₂` of a simply connected 5-manifold into `S²`-bundle summands and Barden
/// manifolds `M_{p^j}` with `H₂ = Z_{p^j} ⊕ Z_{p^j}`.
pub fn barden_decompose(h2: &AbelianGroup, spin: bool) -> Result<BardenDecomposition, ClassifyError> {
    let mut counts: BTreeMap<BigInt, usize> = BTreeMap::new();
    for t in h2.torsion() {
        for q in prime_power_factors(t) {
            *counts.entry(q).or_default() += 1;
        }
    }
    let mut mk_factors = Vec::new();
    for (q, n) in counts {
        if n % 2 != 0 {
            return Err(ClassifyError::NotRealizable(format!(
                "torsion {h2} is not of the form A ⊕ A (Z/{q} occurs {n} times)"
            )));
        }
        mk_factors.extend(std::iter::repeat_n(q, n / 2));
    }
    if !spin && h2.free_rank() == 0 {
        return Err(ClassifyError::NotRealizable(
            "a non-spin decomposition needs a free summand for S²×̃S³".into(),
        ));
    }
    Ok(BardenDecomposition {
        free_summands: h2.free_rank(),
        mk_factors,
        tilde: !spin,
    })
}

/// `k` when the book has the homology of `M_k` (`k = 1`: of `S⁵`).
pub fn identify_nk(b: &OpenBook) -> Result<Option<BigInt>, ClassifyError> {
    if b.page().has_one_handles() {
        return Err(ClassifyError::Unsupported("identification needs a page without 1-handles".into()));
    }
    let h = open_book_homology(b)?;
    if !h.h1.is_trivial() || h.spin != Spin::Yes || h.h2.free_rank() != 0 {
        return Ok(None);
    }
    Ok(match h.h2.torsion() {
        [] => Some(BigInt::from(1)),
        [a, b] if a == b => Some(a.clone()),
        _ => None,
    })
}

/// Two move scripts, one per side of a claimed stable equivalence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableTrace {
    #[serde(default)]
    pub left: Vec<DiagMove>,
    #[serde(default)]
    pub right: Vec<DiagMove>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableReport {
    pub accepted: bool,
    /// Summands added on the left (`AddSummand` and `Double` steps).
    pub k: usize,
    pub k_prime: usize,
    pub rank_h2_left: usize,
    pub rank_h2_right: usize,
    /// `k − k' = rank H₂(M') − rank H₂(M)`.
    pub rank_identity: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diff: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

fn adds_summand(m: &DiagMove) -> bool {
    matches!(m, DiagMove::AddSummand { .. } | DiagMove::Double { .. })
}

fn replay(b: &OpenBook, script: &[DiagMove]) -> Result<OpenBook, (usize, MoveError)> {
    let mut cur = b.clone();
    for (i, m) in script.iter().enumerate() {
        cur = apply_move(&cur, m).map_err(|e| (i, e))?;
    }
    Ok(cur)
}

/// Replays both scripts and compares the resulting diagrams up to renaming of circles
/// and handles and reversal of circle orientations. Stabilization credits are ignored.
pub fn verify_stable_equivalence(b1: &OpenBook, b2: &OpenBook, trace: &StableTrace) -> StableReport {
    let k = trace.left.iter().filter(|m| adds_summand(m)).count();
    let k_prime = trace.right.iter().filter(|m| adds_summand(m)).count();
    let r1 = b1.page().second_betti();
    let r2 = b2.page().second_betti();
    let mut report = StableReport {
        accepted: false,
        k,
        k_prime,
        rank_h2_left: r1,
        rank_h2_right: r2,
        rank_identity: k as i64 - k_prime as i64 == r2 as i64 - r1 as i64,
        diff: Vec::new(),
        failure: None,
    };
    if !b1.has_trivial_word() || !b2.has_trivial_word() {
        report.failure = Some("both books must have trivial monodromy".into());
        return report;
    }
    let sides = [("left", b1, &trace.left), ("right", b2, &trace.right)];
    let mut finals = Vec::new();
    for (side, b, script) in sides {
        match replay(b, script) {
            Ok(f) => finals.push(f),
            Err((i, e)) => {
                report.failure = Some(format!("{side} step {}: {e}", i + 1));
                return report;
            }
        }
    }
    match match_diagrams(finals[0].page(), finals[1].page()) {
        Ok(()) => report.accepted = report.rank_identity,
        Err(diff) => report.diff = diff,
    }
    if (report.accepted || report.diff.is_empty())
        && !report.rank_identity {
            report.failure = Some("rank identity k - k' = rank H2(M') - rank H2(M) fails".into());
        }
    report
}

/// Finds a bijection of circles (with optional orientation flips) and uses the handle
/// order to identify handles. Returns a human-readable diff when none exists.
pub fn match_diagrams(a: &PageDiagram, b: &PageDiagram) -> Result<(), Vec<String>> {
    let mut diff = Vec::new();
    if a.handles().len() != b.handles().len() {
        diff.push(format!("handle counts differ: {} vs {}", a.handles().len(), b.handles().len()));
    }
    if a.circle_count() != b.circle_count() {
        diff.push(format!("circle counts differ: {} vs {}", a.circle_count(), b.circle_count()));
    }
    if !diff.is_empty() {
        return Err(diff);
    }
    let rename: Vec<(String, String)> = b
        .handles()
        .iter()
        .zip(a.handles())
        .map(|(x, y)| (x.clone(), y.clone()))
        .collect();
    let b_words: Vec<crate::words::Word> = b
        .circles()
        .iter()
        .map(|c| {
            let mut w = c.word.clone();
            for (i, (from, _)) in rename.iter().enumerate() {
                w = w.rename(from, &format!("__h{i}"));
            }
            for (i, (_, to)) in rename.iter().enumerate() {
                w = w.rename(&format!("__h{i}"), to);
            }
            w
        })
        .collect();
    let n = a.circle_count();
    // candidates[i]: (j, flip) pairs compatible with circle i of `a`.
    let candidates: Vec<Vec<(usize, i64)>> = (0..n)
        .map(|i| {
            let ca = &a.circles()[i];
            let mut out = Vec::new();
            for (j, cb) in b.circles().iter().enumerate() {
                if ca.tb != cb.tb {
                    continue;
                }
                if b_words[j] == ca.word && cb.rot == ca.rot {
                    out.push((j, 1));
                }
                if b_words[j] == ca.word.inverse() && cb.rot == -ca.rot && !(ca.word.is_empty() && ca.rot == 0) {
                    out.push((j, -1));
                }
            }
            out
        })
        .collect();
    let mut assign: Vec<(usize, i64)> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if search(a, b, &candidates, &mut assign, &mut used) {
        return Ok(());
    }
    for (i, c) in candidates.iter().enumerate() {
        if c.is_empty() {
            let ca = &a.circles()[i];
            let mut line = String::new();
            let _ = write!(
                line,
                "circle {} (word {}, tb {}, rot {}) has no counterpart",
                ca.name, ca.word, ca.tb, ca.rot
            );
            diff.push(line);
        }
    }
    if diff.is_empty() {
        diff.push("circles match individually but linking numbers differ".into());
    }
    Err(diff)
}

fn search(
    a: &PageDiagram,
    b: &PageDiagram,
    candidates: &[Vec<(usize, i64)>],
    assign: &mut Vec<(usize, i64)>,
    used: &mut [bool],
) -> bool {
    let i = assign.len();
    if i == candidates.len() {
        return true;
    }
    for &(j, f) in &candidates[i] {
        if used[j] {
            continue;
        }
        let consistent = assign.iter().enumerate().all(|(p, &(jp, fp))| {
            match (a.q(p, i), b.q(jp, j)) {
                (Some(x), Some(y)) => x == f * fp * y,
                (None, None) => true,
                _ => false,
            }
        });
        if !consistent {
            continue;
        }
        used[j] = true;
        assign.push((j, f));
        if search(a, b, candidates, assign, used) {
            return true;
        }
        assign.pop();
        used[j] = false;
    }
    false
}

/// The gcd of the rotation numbers, as used by [`classify_trivial_monodromy`].
pub fn rot_gcd(rot: &[i64]) -> u64 {
    rot.iter()
        .fold(BigInt::zero(), |g, r| g.gcd(&BigInt::from(*r)))
        .abs()
        .to_u64()
        .unwrap_or(0)
}

/// Shark slide scripts: `{rot 1, rot 1}` and `{rot 2, rot 1}` become the same diagram.
pub fn shark_slide_certificate() -> (OpenBook, OpenBook, StableTrace) {
    use crate::page::Circle;
    let two = |r1: i64, r2: i64| {
        OpenBook::trivial(
            PageDiagram::from_unknots(vec![Circle::unknot("K1", r1), Circle::unknot("K2", r2)], &[])
                .expect("unlinked unknots"),
        )
    };
    let parse = |s: &str| crate::moves::parse_script(s).expect("fixed script parses");
    let left = parse(
        "slide2 K1 over K2 +\n\
         moveII K1 K2 +\nmoveII K1 K2 +\nmoveII K1 K2 +\n\
         moveI_inv K1\nmoveI_inv K1\nmoveI_inv K1\nmoveI_inv K1\nmoveI_inv K1\nmoveI_inv K1\n",
    );
    let right = parse("moveI K1\n");
    (two(1, 1), two(2, 1), StableTrace { left, right })
}
