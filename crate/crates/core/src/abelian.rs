//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::smith::diagonal_smith;

/// `Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with `2 ≤ d₁ | d₂ | … | d_k`.
///
/// The representation is unique, so structural equality is isomorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

/// One canonical cyclic summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CyclicSummand {
    Infinite,
    Finite(BigInt),
}

impl CyclicSummand {
    /// The order, `None` for `Z`.
    pub fn order(&self) -> Option<&BigInt> {
        match self {
            CyclicSummand::Infinite => None,
            CyclicSummand::Finite(d) => Some(d),
        }
    }
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// `Z/n`. Panics if `n == 0`.
    pub fn cyclic(n: u64) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        Self::normalize(0, [n]).expect("positive order")
    }

    /// Canonical form of `Z^free_rank ⊕ ⊕ Z/orderᵢ`. Orders equal to 1 vanish;
    /// orders `≤ 0` are rejected.
    pub fn normalize<I, T>(free_rank: usize, orders: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let orders: Vec<BigInt> = orders.into_iter().map(Into::into).collect();
        if let Some(bad) = orders.iter().find(|d| !d.is_positive()) {
            return Err(Error::InvalidArgument(format!(
                "cyclic order must be positive, got {bad}"
            )));
        }
        let chain = diagonal_smith(&orders)
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        Ok(FgAbelianGroup {
            free_rank,
            invariant_factors: chain,
        })
    }

    /// Trusted constructor for callers that already hold a divisibility chain
    /// (SNF diagonals). Checked in debug builds.
    pub(crate) fn from_canonical_parts(free_rank: usize, invariant_factors: Vec<BigInt>) -> Self {
        debug_assert!(invariant_factors.iter().all(|d| d > &BigInt::one()));
        debug_assert!(invariant_factors
            .windows(2)
            .all(|w| w[1].is_multiple_of(&w[0])));
        FgAbelianGroup {
            free_rank,
            invariant_factors,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, or `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    pub fn torsion(&self) -> Self {
        FgAbelianGroup {
            free_rank: 0,
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    /// Minimal number of generators, `d(A)`.
    pub fn min_generators(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Canonical summands: free ones first, then invariant factors ascending.
    /// This is also the generator order used for homomorphism matrices.
    pub fn summands(&self) -> Vec<CyclicSummand> {
        std::iter::repeat_n(CyclicSummand::Infinite, self.free_rank)
            .chain(
                self.invariant_factors
                    .iter()
                    .cloned()
                    .map(CyclicSummand::Finite),
            )
            .collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let orders = self
            .invariant_factors
            .iter()
            .chain(&other.invariant_factors)
            .cloned();
        Self::normalize(self.free_rank + other.free_rank, orders).expect("orders are positive")
    }

    /// `A ⊗ B`, expanded bilinearly over canonical summands.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut orders: Vec<BigInt> = Vec::new();
        for _ in 0..other.free_rank {
            orders.extend(self.invariant_factors.iter().cloned());
        }
        for _ in 0..self.free_rank {
            orders.extend(other.invariant_factors.iter().cloned());
        }
        for m in &self.invariant_factors {
            for n in &other.invariant_factors {
                orders.push(m.gcd(n));
            }
        }
        Self::normalize(self.free_rank * other.free_rank, orders).expect("orders are positive")
    }

    /// `Tor(A, B)`; only torsion summands contribute.
    pub fn tor(&self, other: &Self) -> Self {
        let orders = self
            .invariant_factors
            .iter()
            .flat_map(|m| other.invariant_factors.iter().map(move |n| m.gcd(n)));
        Self::normalize(0, orders).expect("orders are positive")
    }

    /// `Λ²(A)`, the exterior square: `Z^{r(r-1)/2}`, each `Z/dᵢ` repeated `r`
    /// times, and `Z/gcd(dᵢ, dⱼ) = Z/dᵢ` for each pair `i < j`.
    pub fn exterior_square(&self) -> Self {
        let r = self.free_rank;
        let mut orders: Vec<BigInt> = Vec::new();
        for (i, d) in self.invariant_factors.iter().enumerate() {
            orders.extend(std::iter::repeat_n(d.clone(), r));
            for e in &self.invariant_factors[i + 1..] {
                orders.push(d.gcd(e));
            }
        }
        Self::normalize(r * r.saturating_sub(1) / 2, orders).expect("orders are positive")
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" + "))
    }
}

/// Parses the rendering produced by `Display`, and more loosely any sum of
/// `0`, `Z`, `Z^r` and `Z/n` terms in any order.
impl FromStr for FgAbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rank = 0usize;
        let mut orders: Vec<BigInt> = Vec::new();
        let mut offset = 0;
        for term in s.split('+') {
            let lead = term.len() - term.trim_start().len();
            let pos = s[..offset + lead].chars().count();
            let t = term.trim();
            offset += term.len() + 1;
            let bad = |msg: &str| Err(Error::syntax(pos, format!("{msg} in `{t}`")));
            if t == "0" {
                continue;
            }
            let Some(rest) = t.strip_prefix('Z') else {
                return bad("expected `0`, `Z`, `Z^r` or `Z/n`");
            };
            let rest = rest.trim_start();
            if rest.is_empty() {
                rank += 1;
            } else if let Some(exp) = rest.strip_prefix('^') {
                match exp.trim().parse::<usize>() {
                    Ok(r) => rank += r,
                    Err(_) => return bad("bad rank"),
                }
            } else if let Some(n) = rest.strip_prefix('/') {
                match n.trim().parse::<BigInt>() {
                    Ok(n) if n.is_positive() => orders.push(n),
                    _ => return bad("bad cyclic order"),
                }
            } else {
                return bad("unexpected suffix");
            }
        }
        Self::normalize(rank, orders)
    }
}

/// Wire form `{ "rank": r, "factors": [d₁, …] }`. Factors that fit in a `u64`
/// are JSON numbers; larger ones are decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    rank: usize,
    factors: Vec<WireInt>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(u64),
    Big(String),
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            rank: self.free_rank,
            factors: self
                .invariant_factors
                .iter()
                .map(|d| match d.to_u64() {
                    Some(x) => WireInt::Small(x),
                    None => WireInt::Big(d.to_string()),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FgAbelianGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = Wire::deserialize(deserializer)?;
        let mut orders = Vec::with_capacity(wire.factors.len());
        for f in wire.factors {
            orders.push(match f {
                WireInt::Small(x) => BigInt::from(x),
                WireInt::Big(s) => s.parse::<BigInt>().map_err(D::Error::custom)?,
            });
        }
        FgAbelianGroup::normalize(wire.rank, orders).map_err(D::Error::custom)
    }
}

/// Shorthand used throughout the tests: `ab(r, &[orders])`.
pub fn ab(free_rank: usize, orders: &[u64]) -> FgAbelianGroup {
    FgAbelianGroup::normalize(free_rank, orders.iter().copied()).expect("orders are positive")
}
