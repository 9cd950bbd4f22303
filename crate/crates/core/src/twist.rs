//! Dehn twist monodromies and the homology of the resulting open books.
//!
//! Monodromy words are stored in application order: the first entry acts first. The
//! composition `τ_{K1} ∘ τ_{K2}` is therefore stored as `[K2, K1]`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::page::{Circle, PageDiagram, PageError};
use crate::zalg::{cokernel, kernel_rank, AbelianGroup, IntMatrix};

/// One Dehn twist along the Lagrangian sphere of circle `circle`; `exp = -1` is left-handed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Twist {
    pub circle: usize,
    pub exp: i8,
}

impl Twist {
    pub fn right(circle: usize) -> Self {
        Twist { circle, exp: 1 }
    }

    pub fn left(circle: usize) -> Self {
        Twist { circle, exp: -1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistError {
    #[error("circle {circle} cannot carry a twist: Q_ii = {q_ii}, expected -2")]
    UnsupportedSphere { circle: usize, q_ii: BigInt },
    #[error("twist exponent must be +1 or -1, got {0}")]
    BadExponent(i8),
    #[error("no circle with index {0}")]
    NoCircle(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Page(#[from] PageError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenBook {
    page: PageDiagram,
    monodromy: Vec<Twist>,
}

impl OpenBook {
    pub fn new(page: PageDiagram, monodromy: Vec<Twist>) -> Result<Self, TwistError> {
        for t in &monodromy {
            if t.exp != 1 && t.exp != -1 {
                return Err(TwistError::BadExponent(t.exp));
            }
            if t.circle >= page.circle_count() {
                return Err(TwistError::NoCircle(t.circle));
            }
        }
        let mut seen: Vec<usize> = monodromy.iter().map(|t| t.circle).collect();
        seen.sort_unstable();
        seen.dedup();
        for i in seen {
            if !page.validate_twist_support(i)? {
                return Err(TwistError::UnsupportedSphere {
                    circle: i,
                    q_ii: BigInt::from(page.circles()[i].tb - 1),
                });
            }
        }
        Ok(OpenBook { page, monodromy })
    }

    /// `OB(Σ, id)`.
    pub fn trivial(page: PageDiagram) -> Self {
        OpenBook {
            page,
            monodromy: Vec::new(),
        }
    }

    /// `OB(D⁴, id)`, the standard `S⁵`.
    pub fn sphere() -> Self {
        Self::trivial(PageDiagram::empty())
    }

    /// Builds a book from a word in composition notation (rightmost factor acts first).
    pub fn from_composition(page: PageDiagram, composition: &[Twist]) -> Result<Self, TwistError> {
        Self::new(page, composition.iter().rev().copied().collect())
    }

    pub fn page(&self) -> &PageDiagram {
        &self.page
    }

    pub fn monodromy(&self) -> &[Twist] {
        &self.monodromy
    }

    pub fn has_trivial_word(&self) -> bool {
        self.monodromy.is_empty()
    }

    pub fn into_parts(self) -> (PageDiagram, Vec<Twist>) {
        (self.page, self.monodromy)
    }

    /// Removes formally adjacent pairs `τ τ⁻¹` until none remain. Nothing else is reordered.
    pub fn cancel_adjacent_inverses(&self) -> OpenBook {
        let mut out: Vec<Twist> = Vec::with_capacity(self.monodromy.len());
        for &t in &self.monodromy {
            match out.last() {
                Some(last) if last.circle == t.circle && last.exp == -t.exp => {
                    out.pop();
                }
                _ => out.push(t),
            }
        }
        OpenBook {
            page: self.page.clone(),
            monodromy: out,
        }
    }

    /// Monodromy word with circle names, in application order, e.g. `K2 K1^-1`.
    pub fn word_string(&self) -> String {
        if self.monodromy.is_empty() {
            return "id".into();
        }
        self.monodromy
            .iter()
            .map(|t| {
                let name = &self.page.circles()[t.circle].name;
                if t.exp < 0 {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn require_no_handles(page: &PageDiagram) -> Result<(), TwistError> {
    if page.has_one_handles() {
        Err(TwistError::Unsupported(
            "homology of open books is only computed for pages without 1-handles".into(),
        ))
    } else {
        Ok(())
    }
}

/// Action of `τ_{L_i}^{sign}` on `H₂(Σ)`: `u ↦ u + Q(e_i, u)·e_i`. When `Q_ii = −2` the
/// matrix squares to the identity, so the inverse twist acts by the same matrix.
pub fn twist_matrix(q: &IntMatrix, i: usize, sign: i8) -> Result<IntMatrix, TwistError> {
    if i >= q.rows() {
        return Err(TwistError::NoCircle(i));
    }
    if sign != 1 && sign != -1 {
        return Err(TwistError::BadExponent(sign));
    }
    if q[(i, i)] != BigInt::from(-2) {
        return Err(TwistError::UnsupportedSphere {
            circle: i,
            q_ii: q[(i, i)].clone(),
        });
    }
    let mut t = IntMatrix::identity(q.rows());
    for j in 0..q.cols() {
        t[(i, j)] += &q[(i, j)];
    }
    Ok(t)
}

/// `ψ_*` on `H₂(Σ)`: the product of twist matrices, last-applied on the left.
pub fn monodromy_action(b: &OpenBook) -> Result<IntMatrix, TwistError> {
    require_no_handles(&b.page)?;
    let q = b.page.framing_matrix()?;
    let mut psi = IntMatrix::identity(q.rows());
    for t in &b.monodromy {
        psi = &twist_matrix(&q, t.circle, t.exp)? * &psi;
    }
    Ok(psi)
}

/// One step of the relative-cycle recursion: the twist along `L_j` moves `D_i + v` to
/// `D_i + v + (δ_ij + (Qv)_j)·e_j`. The map is an involution for `Q_jj = −2`, which is
/// also how the left-handed twist acts.
fn correction_step(q: &IntMatrix, v: &mut [BigInt], i: usize, j: usize) {
    let mut coeff: BigInt = (0..v.len()).map(|k| &q[(j, k)] * &v[k]).sum();
    if i == j {
        coeff += BigInt::one();
    }
    v[j] += coeff;
}

/// Column `i` is `c_i` where the monodromy sends the meridional disc `D_i` to `D_i + c_i`.
pub fn relative_correction(b: &OpenBook) -> Result<IntMatrix, TwistError> {
    relative_correction_prefix(b, b.monodromy.len())
}

/// As [`relative_correction`], stopping after the first `steps` twists.
pub fn relative_correction_prefix(b: &OpenBook, steps: usize) -> Result<IntMatrix, TwistError> {
    require_no_handles(&b.page)?;
    let q = b.page.framing_matrix()?;
    let m = q.rows();
    for t in &b.monodromy {
        twist_matrix(&q, t.circle, t.exp)?;
    }
    let mut c = IntMatrix::zeros(m, m);
    for i in 0..m {
        let mut v = vec![BigInt::zero(); m];
        for t in b.monodromy.iter().take(steps) {
            correction_step(&q, &mut v, i, t.circle);
        }
        for (k, x) in v.into_iter().enumerate() {
            c[(k, i)] = x;
        }
    }
    Ok(c)
}

/// Homology of the mapping torus `A = Σ ×_ψ S¹` from the Wang sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingTorusHomology {
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
    pub h3: AbelianGroup,
}

pub fn mapping_torus_homology(b: &OpenBook) -> Result<MappingTorusHomology, TwistError> {
    let psi = monodromy_action(b)?;
    let delta = psi.sub(&IntMatrix::identity(psi.rows()));
    Ok(MappingTorusHomology {
        h1: AbelianGroup::free(1),
        h2: cokernel(&delta),
        h3: AbelianGroup::free(kernel_rank(&delta)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Yes => "yes",
            Spin::No => "no",
            Spin::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    #[serde(rename = "H0")]
    pub h0: AbelianGroup,
    #[serde(rename = "H1")]
    pub h1: AbelianGroup,
    #[serde(rename = "H2")]
    pub h2: AbelianGroup,
    #[serde(rename = "H3")]
    pub h3: AbelianGroup,
    #[serde(rename = "H4")]
    pub h4: AbelianGroup,
    #[serde(rename = "H5")]
    pub h5: AbelianGroup,
    pub spin: Spin,
    pub chern_class_note: String,
}

impl HomologyProfile {
    /// Equality of the groups and spin state, ignoring the basis-dependent note.
    pub fn same_invariants(&self, other: &HomologyProfile) -> bool {
        self.groups() == other.groups() && self.spin == other.spin
    }

    pub fn groups(&self) -> [&AbelianGroup; 6] {
        [&self.h0, &self.h1, &self.h2, &self.h3, &self.h4, &self.h5]
    }
}

/// Homology of `OB(Σ, ψ)` for a page built from 2-handles only.
///
/// The Mayer–Vietoris sequence for `M = A ∪ (∂Σ × D²)` collapses to
/// `H₂(M) = coker[(ψ_* − id) | C]` because:
/// - on `H₁` the map from `H₁(∂Σ × S¹)` is injective onto its image with the `S¹`
///   factor hitting the generator of `H₁(A) = Z`, so `H₁(M) = 0`;
/// - `H₂(∂Σ) = ker Q` maps isomorphically onto the `H₂(∂Σ × D²)` summand;
/// - the torus classes `u_i × S¹` go to `c_i` in `H₂(A)` and bound in the binding
///   neighbourhood.
///
/// Poincaré duality with `H₁ = 0` then gives `H₄ = 0` and `H₃` free of rank `b₂`.
pub fn open_book_homology(b: &OpenBook) -> Result<HomologyProfile, TwistError> {
    let psi = monodromy_action(b)?;
    let m = psi.rows();
    let delta = psi.sub(&IntMatrix::identity(m));
    let c = relative_correction(b)?;
    let relations = delta.hcat(&c);
    let h2 = cokernel(&relations);
    let b2 = h2.free_rank();
    Ok(HomologyProfile {
        h0: AbelianGroup::free(1),
        h1: AbelianGroup::trivial(),
        h2,
        h3: AbelianGroup::free(b2),
        h4: AbelianGroup::trivial(),
        h5: AbelianGroup::free(1),
        spin: spin_state(b, &relations),
        chern_class_note: chern_note(b),
    })
}

/// `w₂` is `c₁ mod 2`. With all rotation numbers even it vanishes. Otherwise the rot
/// vector mod 2 defines a functional on the generators of `H₂(M)`; if it kills every
/// relation column it descends to a nonzero class and `M` is not spin. With trivial
/// monodromy the relations are zero and this is always the case.
fn spin_state(b: &OpenBook, relations: &IntMatrix) -> Spin {
    let rot: Vec<i64> = b.page.circles().iter().map(|c| c.rot).collect();
    if rot.iter().all(|r| r % 2 == 0) {
        return Spin::Yes;
    }
    let two = BigInt::from(2);
    let descends = (0..relations.cols()).all(|j| {
        let s: BigInt = (0..relations.rows()).map(|i| BigInt::from(rot[i]) * &relations[(i, j)]).sum();
        (s % &two).is_zero()
    });
    if descends {
        Spin::No
    } else {
        Spin::Unknown
    }
}

fn chern_note(b: &OpenBook) -> String {
    let terms: Vec<String> = b
        .page()
        .circles()
        .iter()
        .filter(|c| c.rot != 0)
        .map(|c| format!("{}*h_{}", c.rot, c.name))
        .collect();
    if terms.is_empty() {
        return "c1 = 0".into();
    }
    format!(
        "c1 = {} where h_K is dual to the core sphere of the 2-handle along K",
        terms.join(" + ")
    )
}

/// The double cover branched along the binding: same page, monodromy `ψ²`.
pub fn double_branched_cover(b: &OpenBook) -> OpenBook {
    let mut monodromy = b.monodromy.clone();
    monodromy.extend_from_slice(&b.monodromy);
    OpenBook {
        page: b.page.clone(),
        monodromy,
    }
}

/// Boundary connected sum of pages with concatenated monodromy. Names in `b2` that clash
/// with names in `b1` get fresh ones.
pub fn book_connected_sum(b1: &OpenBook, b2: &OpenBook) -> OpenBook {
    let (h1, c1, l1) = b1.page.clone().into_parts();
    let (h2, c2, l2) = b2.page.clone().into_parts();
    let mut handles = h1.clone();
    let mut renames: Vec<(String, String)> = Vec::new();
    for h in &h2 {
        let mut name = h.clone();
        let mut n = 2;
        while handles.contains(&name) || h2.iter().any(|o| o != h && *o == name) {
            name = format!("{h}_{n}");
            n += 1;
        }
        if name != *h {
            renames.push((h.clone(), name.clone()));
        }
        handles.push(name);
    }
    let mut circles = c1.clone();
    for c in &c2 {
        let mut c = c.clone();
        // Two-phase rename so that swaps inside b2 cannot collide.
        for (i, (from, _)) in renames.iter().enumerate() {
            c.word = c.word.rename(from, &format!("__tmp{i}"));
        }
        for (i, (_, to)) in renames.iter().enumerate() {
            c.word = c.word.rename(&format!("__tmp{i}"), to);
        }
        let base = c.name.clone();
        let mut n = 2;
        while circles.iter().any(|o| o.name == c.name) || (c.name != base && c2.iter().any(|o| o.name == c.name)) {
            c.name = format!("{base}_{n}");
            n += 1;
        }
        circles.push(c);
    }
    let m1 = c1.len();
    let mut linking: BTreeMap<(usize, usize), i64> = l1;
    for ((i, j), v) in l2 {
        linking.insert((i + m1, j + m1), v);
    }
    let null = |c: &Circle| c.is_null_homologous(&handles);
    for i in 0..m1 {
        for j in m1..circles.len() {
            if null(&circles[i]) && null(&circles[j]) {
                linking.insert((i, j), 0);
            }
        }
    }
    let page = PageDiagram::derived(handles, circles, linking).expect("disjoint union of valid pages is valid");
    let mut monodromy = b1.monodromy.clone();
    monodromy.extend(b2.monodromy.iter().map(|t| Twist {
        circle: t.circle + m1,
        exp: t.exp,
    }));
    OpenBook { page, monodromy }
}

/// Adds an unlinked standard unknot (tb −1, rot 0) and a right-handed twist along it.
pub fn stabilize_book(b: &OpenBook) -> OpenBook {
    let (handles, mut circles, mut linking) = b.page.clone().into_parts();
    let name = b.page.fresh_circle_name("U");
    let new = circles.len();
    for (i, c) in circles.iter().enumerate() {
        if c.is_null_homologous(&handles) {
            linking.insert((i, new), 0);
        }
    }
    circles.push(Circle::unknot(name, 0));
    let page = PageDiagram::derived(handles, circles, linking).expect("adding an unlinked unknot keeps the page valid");
    let mut monodromy = b.monodromy.clone();
    monodromy.push(Twist::right(new));
    OpenBook { page, monodromy }
}

#[derive(Serialize, Deserialize)]
struct BookJson {
    page: PageDiagram,
    #[serde(default)]
    monodromy: Vec<Twist>,
}

impl Serialize for OpenBook {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BookJson {
            page: self.page.clone(),
            monodromy: self.monodromy.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OpenBook {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BookJson::deserialize(d)?;
        OpenBook::new(raw.page, raw.monodromy).map_err(serde::de::Error::custom)
    }
}

/// The page `Σ_k`: two standard unknots with linking number `k`.
pub fn sigma_page(k: i64) -> PageDiagram {
    PageDiagram::from_unknots(
        vec![Circle::unknot("K1", 0), Circle::unknot("K2", 0)],
        &[vec![0, k], vec![k, 0]],
    )
    .expect("two unknots always form a valid page")
}

/// `N_k = OB(Σ_k, (τ_{K1} ∘ τ_{K2})²)`, stored as `[K2, K1, K2, K1]`.
pub fn nk_book(k: i64) -> OpenBook {
    OpenBook::new(sigma_page(k), vec![Twist::right(1), Twist::right(0), Twist::right(1), Twist::right(0)])
        .expect("Σ_k circles have Q_ii = -2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn q(k: i64) -> IntMatrix {
        m(&[vec![-2, k], vec![k, -2]])
    }

    #[test]
    fn twist_matrices_for_sigma_k() {
        for k in -3..=5 {
            assert_eq!(twist_matrix(&q(k), 0, 1).unwrap(), m(&[vec![-1, k], vec![0, 1]]));
            assert_eq!(twist_matrix(&q(k), 1, 1).unwrap(), m(&[vec![1, 0], vec![k, -1]]));
        }
        let t = twist_matrix(&m(&[vec![-2]]), 0, 1).unwrap();
        assert_eq!(t, m(&[vec![-1]]));
        assert_eq!(&t * &t, IntMatrix::identity(1));
        assert!(matches!(
            twist_matrix(&m(&[vec![-3]]), 0, 1),
            Err(TwistError::UnsupportedSphere { .. })
        ));
    }

    #[test]
    fn monodromy_of_nk() {
        for k in 1..=6i64 {
            let psi = monodromy_action(&nk_book(k)).unwrap();
            let expect = m(&[
                vec![k.pow(4) - 3 * k * k + 1, 2 * k - k.pow(3)],
                vec![-2 * k + k.pow(3), -k * k + 1],
            ]);
            assert_eq!(psi, expect, "k = {k}");
        }
        let empty = OpenBook::trivial(sigma_page(3));
        assert_eq!(monodromy_action(&empty).unwrap(), IntMatrix::identity(2));
        let pair = OpenBook::new(sigma_page(3), vec![Twist::right(0), Twist::left(0)]).unwrap();
        assert_eq!(monodromy_action(&pair).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn relative_correction_at_k2() {
        let b = nk_book(2);
        assert_eq!(relative_correction(&b).unwrap(), m(&[vec![4, 6], vec![2, 4]]));
        let prefix = relative_correction_prefix(&b, 3).unwrap();
        assert_eq!(prefix.column(0), vec![BigInt::from(1), BigInt::from(2)]);
        assert!(relative_correction(&OpenBook::trivial(sigma_page(2))).unwrap().is_zero());
    }

    #[test]
    fn mapping_torus_examples() {
        let a3 = mapping_torus_homology(&nk_book(3)).unwrap();
        assert_eq!(a3.h2.order(), Some(BigInt::from(45)));
        let a2 = mapping_torus_homology(&nk_book(2)).unwrap();
        assert_eq!(a2.h2.to_string(), "Z + Z/4");
        let triv = mapping_torus_homology(&OpenBook::trivial(sigma_page(7))).unwrap();
        assert_eq!(triv.h2, AbelianGroup::free(2));
    }

    #[test]
    fn open_book_examples() {
        let h = open_book_homology(&nk_book(3)).unwrap();
        assert_eq!(h.h2.to_string(), "Z/3 + Z/3");
        assert_eq!(h.spin, Spin::Yes);
        assert_eq!(open_book_homology(&nk_book(2)).unwrap().h2.to_string(), "Z/2 + Z/2");
        let dt = OpenBook::new(sigma_page_single(), vec![Twist::right(0), Twist::right(0)]).unwrap();
        let h = open_book_homology(&dt).unwrap();
        let profile: Vec<String> = h.groups().iter().map(|g| g.to_string()).collect();
        assert_eq!(profile, ["Z", "0", "Z", "Z", "0", "Z"]);
    }

    fn sigma_page_single() -> PageDiagram {
        PageDiagram::from_unknots(vec![Circle::unknot("K", 0)], &[]).unwrap()
    }

    #[test]
    fn stabilization_of_the_sphere() {
        let s = stabilize_book(&OpenBook::sphere());
        assert_eq!(s.page().circle_count(), 1);
        assert_eq!(s.monodromy(), &[Twist::right(0)]);
        assert!(open_book_homology(&s).unwrap().h2.is_trivial());
        let s2 = stabilize_book(&s);
        assert_eq!(s2.page().framing_matrix().unwrap(), m(&[vec![-2, 0], vec![0, -2]]));
        assert_eq!(s2.monodromy().len(), 2);
        let sk = stabilize_book(&nk_book(3));
        assert_eq!((sk.page().circle_count(), sk.monodromy().len()), (3, 5));
        assert_eq!(open_book_homology(&sk).unwrap(), open_book_homology(&nk_book(3)).unwrap());
    }

    #[test]
    fn cover_and_sum() {
        let half = OpenBook::new(sigma_page(4), vec![Twist::right(1), Twist::right(0)]).unwrap();
        assert_eq!(double_branched_cover(&half), nk_book(4));
        assert_eq!(double_branched_cover(&OpenBook::sphere()), OpenBook::sphere());
        let sum = book_connected_sum(&nk_book(2), &nk_book(3));
        assert_eq!(sum.page().circle_count(), 4);
        assert_eq!(sum.monodromy().len(), 8);
        let names: Vec<&str> = sum.page().circles().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["K1", "K2", "K1_2", "K2_2"]);
        let h = open_book_homology(&sum).unwrap();
        assert_eq!(h.h2.to_string(), "Z/6 + Z/6");
        let unit = book_connected_sum(&nk_book(3), &OpenBook::sphere());
        assert_eq!(unit, nk_book(3));
        let shark = OpenBook::trivial(PageDiagram::from_unknots(vec![Circle::unknot("S", 1)], &[]).unwrap());
        let two = book_connected_sum(&shark, &shark);
        assert_eq!(two.page().framing_matrix().unwrap(), m(&[vec![-3, 0], vec![0, -3]]));
    }

    #[test]
    fn spin_states() {
        let shark = OpenBook::trivial(PageDiagram::from_unknots(vec![Circle::unknot("S", 1)], &[]).unwrap());
        assert_eq!(open_book_homology(&shark).unwrap().spin, Spin::No);
        assert_eq!(open_book_homology(&OpenBook::sphere()).unwrap().spin, Spin::Yes);
    }

    #[test]
    fn json_round_trip() {
        let b = nk_book(5);
        let s = serde_json::to_string(&b).unwrap();
        let back: OpenBook = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        let bad = s.replace("\"tb\":-1", "\"tb\":-2");
        assert!(serde_json::from_str::<OpenBook>(&bad).is_err());
    }

    #[test]
    fn composition_order() {
        let comp = [Twist::right(0), Twist::right(1), Twist::right(0), Twist::right(1)];
        assert_eq!(OpenBook::from_composition(sigma_page(2), &comp).unwrap(), nk_book(2));
    }
}
