//! Abstract Stein pages: 1-handle generators, Legendrian attaching circles recorded
//! by (word, tb, rot), and the framing matrix `Q` with `Q_ii = tb_i − 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::words::{Presentation, Word};
use crate::zalg::{cokernel, rank, AbelianGroup, IntMatrix};

/// One Legendrian attaching circle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circle {
    pub name: String,
    pub word: Word,
    pub tb: i64,
    pub rot: i64,
    /// Stabilizations available for destabilization (see the moves module).
    #[serde(default)]
    pub sigma: u32,
}

impl Circle {
    /// Unlinked standard unknot with the given rotation number and maximal `tb = −1 − |rot|`.
    pub fn unknot(name: impl Into<String>, rot: i64) -> Self {
        Circle {
            name: name.into(),
            word: Word::empty(),
            tb: -1 - rot.abs(),
            rot,
            sigma: 0,
        }
    }

    pub fn is_null_homologous(&self, handles: &[String]) -> bool {
        handles.iter().all(|h| self.word.exponent_sum(h) == 0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Front,
    #[default]
    Json,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PageError {
    #[error("framing matrix has undefined entries at {0:?}")]
    UndefinedEntries(Vec<(usize, usize)>),
    #[error("unsupported page: {0}")]
    UnsupportedPage(String),
    #[error("invalid page: {0}")]
    Invalid(String),
    #[error("no circle with index {0}")]
    NoCircle(usize),
}

/// A Kirby diagram of a Stein surface in the abstract: enough to compute `π₁`, `Q`,
/// `H₁(∂Σ)` and `c₁`. Linking numbers are stored only where defined, keyed by `(i, j)`
/// with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PageDiagram {
    handles: Vec<String>,
    circles: Vec<Circle>,
    linking: BTreeMap<(usize, usize), i64>,
    provenance: Provenance,
}

/// Coefficients of `c₁` in the basis dual to the circles' spheres: one `rot` per circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernVector(pub Vec<i64>);

pub(crate) type PageParts = (Vec<String>, Vec<Circle>, BTreeMap<(usize, usize), i64>);

impl PageDiagram {
    pub fn new(
        handles: Vec<String>,
        circles: Vec<Circle>,
        linking: BTreeMap<(usize, usize), i64>,
    ) -> Result<Self, PageError> {
        Self::with_provenance(handles, circles, linking, Provenance::Json)
    }

    pub fn with_provenance(
        handles: Vec<String>,
        circles: Vec<Circle>,
        linking: BTreeMap<(usize, usize), i64>,
        provenance: Provenance,
    ) -> Result<Self, PageError> {
        let invalid = |m: String| Err(PageError::Invalid(m));
        for (i, h) in handles.iter().enumerate() {
            if !crate::words::is_generator_name(h) || handles[..i].contains(h) {
                return invalid(format!("bad or duplicate handle name {h:?}"));
            }
        }
        let mut circles = circles;
        for (i, c) in circles.iter_mut().enumerate() {
            if let Some(l) = c.word.letters().iter().find(|l| !handles.contains(&l.gen)) {
                return invalid(format!("circle {:?} uses unknown handle {:?}", c.name, l.gen));
            }
            c.word = c.word.free_reduce();
            let _ = i;
        }
        for (i, c) in circles.iter().enumerate() {
            if circles[..i].iter().any(|o| o.name == c.name) {
                return invalid(format!("duplicate circle name {:?}", c.name));
            }
        }
        let m = circles.len();
        let null: Vec<bool> = circles.iter().map(|c| c.is_null_homologous(&handles)).collect();
        for &(i, j) in linking.keys() {
            if i >= j || j >= m {
                return invalid(format!("linking key ({i},{j}) out of range or not ordered"));
            }
            if !(null[i] && null[j]) {
                return invalid(format!("linking ({i},{j}) given for a circle that is not null-homologous"));
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                if null[i] && null[j] && !linking.contains_key(&(i, j)) {
                    return invalid(format!("linking ({i},{j}) missing between null-homologous circles"));
                }
            }
        }
        Ok(PageDiagram {
            handles,
            circles,
            linking,
            provenance,
        })
    }

    /// The 4-disc.
    pub fn empty() -> Self {
        PageDiagram {
            handles: Vec::new(),
            circles: Vec::new(),
            linking: BTreeMap::new(),
            provenance: Provenance::Derived,
        }
    }

    /// Page with no 1-handles from circles and a full symmetric framing-compatible linking matrix.
    pub fn from_unknots(circles: Vec<Circle>, linking: &[Vec<i64>]) -> Result<Self, PageError> {
        let mut map = BTreeMap::new();
        for i in 0..circles.len() {
            for j in i + 1..circles.len() {
                map.insert((i, j), linking.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0));
            }
        }
        Self::with_provenance(Vec::new(), circles, map, Provenance::Derived)
    }

    pub fn handles(&self) -> &[String] {
        &self.handles
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn linking_entries(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.linking
    }

    pub fn circle_index(&self, name: &str) -> Option<usize> {
        self.circles.iter().position(|c| c.name == name)
    }

    pub fn has_one_handles(&self) -> bool {
        !self.handles.is_empty()
    }

    /// `Q_ij`, or `None` where the linking number is undefined.
    pub fn q(&self, i: usize, j: usize) -> Option<i64> {
        if i == j {
            return self.circles.get(i).map(|c| c.tb - 1);
        }
        let key = (i.min(j), i.max(j));
        self.linking.get(&key).copied()
    }

    pub fn is_null_homologous(&self, i: usize) -> bool {
        self.circles[i].is_null_homologous(&self.handles)
    }

    pub fn framing_matrix(&self) -> Result<IntMatrix, PageError> {
        let m = self.circles.len();
        let mut missing = Vec::new();
        let mut q = IntMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                match self.q(i, j) {
                    Some(v) => q[(i, j)] = BigInt::from(v),
                    None if i < j => missing.push((i, j)),
                    None => {}
                }
            }
        }
        if missing.is_empty() {
            Ok(q)
        } else {
            Err(PageError::UndefinedEntries(missing))
        }
    }

    /// Generators are the handles, relations the nontrivial circle words in diagram order.
    /// Circles with empty words contribute no relation.
    pub fn fundamental_group(&self) -> Presentation {
        Presentation::new(
            self.handles.clone(),
            self.circles
                .iter()
                .filter(|c| !c.word.is_empty())
                .map(|c| c.word.clone())
                .collect(),
        )
        .expect("page words only use page handles")
    }

    /// Exponent-sum matrix of the circle words (rows: handles, columns: circles).
    pub fn exponent_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = self
            .handles
            .iter()
            .map(|h| self.circles.iter().map(|c| BigInt::from(c.word.exponent_sum(h))).collect())
            .collect();
        IntMatrix::from_big_rows(rows, self.circles.len())
    }

    /// Rank of `H₂(Σ)`: circles minus the rank of their exponent sums.
    pub fn second_betti(&self) -> usize {
        self.circles.len() - rank(&self.exponent_matrix())
    }

    /// `H₁(∂Σ) ≅ coker Q`; only for pages built from 2-handles alone.
    pub fn boundary_homology(&self) -> Result<AbelianGroup, PageError> {
        if self.has_one_handles() {
            return Err(PageError::UnsupportedPage(
                "boundary homology is only computed for pages without 1-handles".into(),
            ));
        }
        Ok(cokernel(&self.framing_matrix()?))
    }

    pub fn first_chern(&self) -> ChernVector {
        ChernVector(self.circles.iter().map(|c| c.rot).collect())
    }

    /// `Q_ii = −2`, the homological condition for a Lagrangian sphere on circle `i`.
    /// The circle must be null-homologous so that it carries a class in `H₂(Σ)`.
    pub fn validate_twist_support(&self, i: usize) -> Result<bool, PageError> {
        if i >= self.circles.len() {
            return Err(PageError::NoCircle(i));
        }
        if !self.is_null_homologous(i) {
            return Err(PageError::UnsupportedPage(format!(
                "circle {:?} runs over 1-handles with nonzero exponent sum",
                self.circles[i].name
            )));
        }
        Ok(self.circles[i].tb - 1 == -2)
    }

    pub(crate) fn into_parts(self) -> PageParts {
        (self.handles, self.circles, self.linking)
    }

    /// Rebuilds with the same provenance tag set to derived.
    pub(crate) fn derived(
        handles: Vec<String>,
        circles: Vec<Circle>,
        linking: BTreeMap<(usize, usize), i64>,
    ) -> Result<Self, PageError> {
        Self::with_provenance(handles, circles, linking, Provenance::Derived)
    }

    /// Name not used by any circle, of the form `<prefix><n>`.
    pub fn fresh_circle_name(&self, prefix: &str) -> String {
        (1..)
            .map(|n| format!("{prefix}{n}"))
            .find(|c| self.circle_index(c).is_none())
            .expect("unbounded name supply")
    }

    pub fn fresh_handle_name(&self, prefix: &str) -> String {
        (1..)
            .map(|n| format!("{prefix}{n}"))
            .find(|c| !self.handles.contains(c))
            .expect("unbounded name supply")
    }
}

// JSON schema: {handles:[…], circles:[{name, word, tb, rot, sigma}], linking:{"i,j": n}, provenance}
#[derive(Serialize, Deserialize)]
struct PageJson {
    #[serde(default)]
    handles: Vec<String>,
    #[serde(default)]
    circles: Vec<Circle>,
    #[serde(default)]
    linking: BTreeMap<String, i64>,
    #[serde(default)]
    provenance: Provenance,
}

impl Serialize for PageDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PageJson {
            handles: self.handles.clone(),
            circles: self.circles.clone(),
            linking: self
                .linking
                .iter()
                .map(|(&(i, j), &v)| (format!("{i},{j}"), v))
                .collect(),
            provenance: self.provenance,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PageDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PageJson::deserialize(d)?;
        let mut linking = BTreeMap::new();
        for (k, v) in raw.linking {
            let (a, b) = k
                .split_once(',')
                .ok_or_else(|| D::Error::custom(format!("bad linking key {k:?}")))?;
            let a: usize = a.trim().parse().map_err(|_| D::Error::custom(format!("bad linking key {k:?}")))?;
            let b: usize = b.trim().parse().map_err(|_| D::Error::custom(format!("bad linking key {k:?}")))?;
            linking.insert((a.min(b), a.max(b)), v);
        }
        PageDiagram::with_provenance(raw.handles, raw.circles, linking, raw.provenance).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(k: i64) -> PageDiagram {
        PageDiagram::from_unknots(
            vec![Circle::unknot("K1", 0), Circle::unknot("K2", 0)],
            &[vec![0, k], vec![k, 0]],
        )
        .unwrap()
    }

    #[test]
    fn framing_matrix_examples() {
        assert_eq!(
            sigma(3).framing_matrix().unwrap(),
            IntMatrix::from_rows(&[vec![-2, 3], vec![3, -2]])
        );
        let u = PageDiagram::from_unknots(vec![Circle::unknot("U", 0)], &[]).unwrap();
        assert_eq!(u.framing_matrix().unwrap(), IntMatrix::from_rows(&[vec![-2]]));
        let over = PageDiagram::new(
            vec!["g".into()],
            vec![
                Circle {
                    name: "A".into(),
                    word: Word::generator("g"),
                    tb: -1,
                    rot: 0,
                    sigma: 0,
                },
                Circle::unknot("B", 0),
            ],
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(over.framing_matrix(), Err(PageError::UndefinedEntries(vec![(0, 1)])));
    }

    #[test]
    fn fundamental_group_examples() {
        let p = PageDiagram::new(
            vec!["g".into()],
            vec![Circle {
                name: "C".into(),
                word: Word::generator("g"),
                tb: -1,
                rot: 0,
                sigma: 0,
            }],
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(p.fundamental_group().to_string(), "<g | g>");
        assert!(sigma(2).fundamental_group().is_empty());
        let q = PageDiagram::new(
            vec!["g".into(), "h".into()],
            vec![Circle {
                name: "C".into(),
                word: Word::parse("g h G H").unwrap(),
                tb: -1,
                rot: 0,
                sigma: 0,
            }],
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(q.fundamental_group().to_string(), "<g,h | g h G H>");
    }

    #[test]
    fn boundary_homology_examples() {
        assert_eq!(sigma(3).boundary_homology().unwrap().to_string(), "Z/5");
        assert_eq!(sigma(2).boundary_homology().unwrap().to_string(), "Z + Z/2");
        assert!(PageDiagram::empty().boundary_homology().unwrap().is_trivial());
        let with_handle = PageDiagram::new(vec!["g".into()], vec![], BTreeMap::new()).unwrap();
        assert!(matches!(with_handle.boundary_homology(), Err(PageError::UnsupportedPage(_))));
    }

    #[test]
    fn chern_and_twist_support() {
        let p = PageDiagram::from_unknots(vec![Circle::unknot("A", 1), Circle::unknot("B", 1)], &[]).unwrap();
        assert_eq!(p.first_chern(), ChernVector(vec![1, 1]));
        assert_eq!(PageDiagram::empty().first_chern(), ChernVector(vec![]));
        assert_eq!(sigma(4).validate_twist_support(0), Ok(true));
        let shark = PageDiagram::from_unknots(vec![Circle::unknot("S", 1)], &[]).unwrap();
        assert_eq!(shark.validate_twist_support(0), Ok(false));
    }

    #[test]
    fn json_round_trip_and_schema() {
        let p = sigma(5);
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["linking"]["0,1"], 5);
        assert_eq!(v["circles"][0]["tb"], -1);
        let back: PageDiagram = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"handles":[],"circles":[{"name":"A","word":"1","tb":-1,"rot":0},{"name":"B","word":"1","tb":-1,"rot":0}],"linking":{}}"#;
        assert!(serde_json::from_str::<PageDiagram>(bad).is_err());
    }
}
