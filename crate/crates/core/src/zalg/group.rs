use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;

/// Finitely generated abelian group `Z^free_rank ⊕ Z/t₁ ⊕ … ⊕ Z/t_n` with `t₁ | t₂ | …`, every `tᵢ ≥ 2`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("invariant factor {0} must be at least 2")]
    BadFactor(BigInt),
    #[error("invariant factors {0} and {1} break the divisibility chain")]
    NotAChain(BigInt, BigInt),
    #[error("cannot parse abelian group from {0:?}")]
    Parse(String),
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Builds a group from an already-normalized invariant factor list.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, GroupError> {
        for t in &torsion {
            if *t < BigInt::from(2) {
                return Err(GroupError::BadFactor(t.clone()));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(GroupError::NotAChain(w[0].clone(), w[1].clone()));
            }
        }
        Ok(AbelianGroup { free_rank, torsion })
    }

    /// Normalizes an arbitrary direct sum of cyclic groups `Z/cᵢ` (with `cᵢ = 0` meaning `Z`).
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(orders: I) -> Self {
        let orders: Vec<BigInt> = orders.into_iter().map(|c| c.abs()).collect();
        cokernel(&IntMatrix::diagonal(&orders))
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t)
    }

    /// Direct sum.
    pub fn sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let orders = std::iter::repeat_n(BigInt::zero(), self.free_rank + other.free_rank)
            .chain(self.torsion.iter().cloned())
            .chain(other.torsion.iter().cloned());
        Self::from_cyclic_orders(orders)
    }

    /// Prime-power decomposition of the torsion part, ascending by prime then exponent.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for t in &self.torsion {
            out.extend(prime_power_factors(t));
        }
        out.sort();
        out
    }
}

/// Splits `n ≥ 1` into maximal prime powers by trial division.
pub fn prime_power_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            let mut q = BigInt::one();
            while n.is_multiple_of(&p) {
                n /= &p;
                q *= &p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// `Z^rows / span(columns of a)`: each column is one relation among the row generators.
pub fn cokernel(a: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion: Vec<BigInt> = diag
        .into_iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .collect();
    AbelianGroup {
        free_rank: a.rows() - rank,
        torsion,
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank()
}

/// Rank of the integer kernel of `a` acting on column vectors.
pub fn kernel_rank(a: &IntMatrix) -> usize {
    a.cols() - rank(a)
}

/// Normal form of `v` under the left action of `GL(m, Z)`: `(gcd(v), 0, …, 0)`.
pub fn gl_orbit_invariant(v: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); v.len()];
    if let Some(first) = out.first_mut() {
        *first = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    }
    out
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for AbelianGroup {
    type Err = GroupError;

    /// Accepts any order of summands, e.g. `"Z/2 + Z^2 + Z/3"`, and normalizes.
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::Parse(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut orders = Vec::new();
        for part in s.split('+').map(str::trim) {
            if part == "Z" {
                orders.push(BigInt::zero());
            } else if let Some(r) = part.strip_prefix("Z^") {
                let r: usize = r.parse().map_err(|_| bad())?;
                orders.extend(std::iter::repeat_n(BigInt::zero(), r));
            } else if let Some(t) = part.strip_prefix("Z/") {
                let t: BigInt = t.parse().map_err(|_| bad())?;
                if t <= BigInt::zero() {
                    return Err(bad());
                }
                orders.push(t);
            } else {
                return Err(bad());
            }
        }
        Ok(Self::from_cyclic_orders(orders))
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel(&IntMatrix::from_rows(&[vec![-2, 3], vec![3, -2]]));
        assert_eq!(g.to_string(), "Z/5");
        let g = cokernel(&IntMatrix::from_rows(&[vec![-2, 2], vec![2, -2]]));
        assert_eq!(g.to_string(), "Z + Z/2");
        let g = cokernel(&IntMatrix::from_rows(&[vec![0]]));
        assert_eq!(g, AbelianGroup::free(1));
    }

    #[test]
    fn cokernel_counts_rows_not_columns() {
        // one relation 2e₁ on Z³
        let a = IntMatrix::from_rows(&[vec![2], vec![0], vec![0]]);
        assert_eq!(cokernel(&a).to_string(), "Z^2 + Z/2");
        // three relations on Z: e, 2e, 0
        let b = IntMatrix::from_rows(&[vec![1, 2, 0]]);
        assert!(cokernel(&b).is_trivial());
    }

    #[test]
    fn kernel_rank_examples() {
        assert_eq!(kernel_rank(&IntMatrix::from_rows(&[vec![-2, 2], vec![2, -2]])), 1);
        assert_eq!(kernel_rank(&IntMatrix::zeros(2, 2)), 2);
        assert_eq!(kernel_rank(&IntMatrix::from_rows(&[vec![1, 1], vec![0, 3]])), 0);
    }

    #[test]
    fn orbit_invariant_examples() {
        assert_eq!(gl_orbit_invariant(&big(&[2, 4])), big(&[2, 0]));
        assert_eq!(gl_orbit_invariant(&big(&[0, 0, 0])), big(&[0, 0, 0]));
        assert_eq!(gl_orbit_invariant(&big(&[3, 5])), big(&[1, 0]));
        assert_eq!(gl_orbit_invariant(&big(&[-6])), big(&[6]));
        assert!(gl_orbit_invariant(&[]).is_empty());
    }

    #[test]
    fn display_and_parse() {
        let g: AbelianGroup = "Z/4 + Z^2 + Z/2".parse().unwrap();
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/4");
        let g: AbelianGroup = "Z/2 + Z/3".parse().unwrap();
        assert_eq!(g.to_string(), "Z/6");
        assert_eq!("0".parse::<AbelianGroup>().unwrap(), AbelianGroup::trivial());
        assert!("Q".parse::<AbelianGroup>().is_err());
        assert!("Z/0".parse::<AbelianGroup>().is_err());
    }

    #[test]
    fn constructor_checks_chain() {
        assert!(AbelianGroup::new(0, big(&[2, 4])).is_ok());
        assert!(matches!(AbelianGroup::new(0, big(&[2, 3])), Err(GroupError::NotAChain(..))));
        assert!(matches!(AbelianGroup::new(0, big(&[1])), Err(GroupError::BadFactor(_))));
    }

    #[test]
    fn elementary_divisors_split_prime_powers() {
        let g: AbelianGroup = "Z/6 + Z/12".parse().unwrap();
        assert_eq!(g.elementary_divisors(), big(&[2, 3, 3, 4]));
    }
}
