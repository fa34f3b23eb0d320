//! What the Mayer-Vietoris sequence of an amalgamated free product
//! `G = G₁ *_H G₂` says about `M(G)`.
//!
//! The low-degree part of the sequence is
//!
//! ```text
//! M(H) --α--> M(G₁) ⊕ M(G₂) --> M(G) --> H_ab --β--> G₁_ab ⊕ G₂_ab --> G_ab --> 0
//! ```
//!
//! so `M(G)` is an extension `0 → coker α → M(G) → ker β → 0`. [`solve`]
//! computes both ends and reports `M(G)` only when the extension is forced:
//! `ker β` free (the sequence splits) or `coker α` trivial.
//!
//! Homomorphisms between abelian groups are integer matrices over the
//! canonical generators of each group (free generators first, then one per
//! invariant factor, ascending). A direct-sum target keeps its summands in the
//! order given, so `Z/4 ⊕ Z/6` has two generators of orders 4 and 6 rather
//! than the canonical `Z/2 ⊕ Z/12` pair.

use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::abelian::FgAbelianGroup;
use crate::error::{Error, Result};
use crate::smith::{cokernel_group, homology, IntMatrix};

/// A homomorphism `source → target₁ ⊕ … ⊕ targetₖ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbGroupMap {
    source: FgAbelianGroup,
    target: Vec<FgAbelianGroup>,
    matrix: IntMatrix,
}

impl AbGroupMap {
    /// `matrix` has one row per target generator and one column per source
    /// generator.
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        Self::into_sum(source, vec![target], matrix)
    }

    /// A map into the direct sum of `targets`, generators concatenated in
    /// order.
    pub fn into_sum(
        source: FgAbelianGroup,
        targets: Vec<FgAbelianGroup>,
        matrix: IntMatrix,
    ) -> Result<Self> {
        let rows: usize = targets.iter().map(FgAbelianGroup::min_generators).sum();
        let cols = source.min_generators();
        if matrix.nrows() != rows || matrix.ncols() != cols {
            return Err(Error::InvalidArgument(format!(
                "map matrix is {}x{}, expected {rows}x{cols} (target generators x source generators)",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(AbGroupMap {
            source,
            target: targets,
            matrix,
        })
    }

    /// The zero map.
    pub fn zero(source: FgAbelianGroup, targets: Vec<FgAbelianGroup>) -> Self {
        let rows = targets.iter().map(FgAbelianGroup::min_generators).sum();
        let cols = source.min_generators();
        AbGroupMap {
            source,
            target: targets,
            matrix: IntMatrix::zeros(rows, cols),
        }
    }

    pub fn source(&self) -> &FgAbelianGroup {
        &self.source
    }

    /// The target as a canonical group.
    pub fn target(&self) -> FgAbelianGroup {
        self.target
            .iter()
            .fold(FgAbelianGroup::trivial(), |acc, t| acc.direct_sum(t))
    }

    pub fn target_summands(&self) -> &[FgAbelianGroup] {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    fn source_orders(&self) -> Vec<Option<BigInt>> {
        generator_orders(std::slice::from_ref(&self.source))
    }

    fn target_orders(&self) -> Vec<Option<BigInt>> {
        generator_orders(&self.target)
    }

    /// Target relation lattice: one column `dᵢ·eᵢ` per torsion generator.
    fn target_relations(&self) -> IntMatrix {
        relation_matrix(&self.target_orders())
    }
}

/// Orders of the generators of a direct sum; `None` marks a free generator.
fn generator_orders(groups: &[FgAbelianGroup]) -> Vec<Option<BigInt>> {
    groups
        .iter()
        .flat_map(|g| g.summands())
        .map(|s| s.order().cloned())
        .collect()
}

fn relation_matrix(orders: &[Option<BigInt>]) -> IntMatrix {
    let torsion: Vec<(usize, &BigInt)> = orders
        .iter()
        .enumerate()
        .filter_map(|(i, d)| d.as_ref().map(|d| (i, d)))
        .collect();
    let mut r = IntMatrix::zeros(orders.len(), torsion.len());
    for (k, (i, d)) in torsion.into_iter().enumerate() {
        r.set(i, k, d.clone());
    }
    r
}

/// Whether every relation of the source maps into the relation lattice of the
/// target: for a source generator of order `d`, `d` times its image column is
/// zero in each free coordinate and divisible by `dⱼ` in each torsion
/// coordinate of order `dⱼ`.
pub fn check_map(f: &AbGroupMap) -> bool {
    let targets = f.target_orders();
    f.source_orders().iter().enumerate().all(|(j, d)| {
        let Some(d) = d else {
            return true;
        };
        targets.iter().enumerate().all(|(i, dt)| {
            let x = d * f.matrix.get(i, j);
            match dt {
                None => x.is_zero(),
                Some(dt) => x.is_multiple_of(dt),
            }
        })
    })
}

fn require_well_defined(f: &AbGroupMap, what: &str) -> Result<()> {
    if check_map(f) {
        Ok(())
    } else {
        Err(Error::IllDefinedMap(format!(
            "{what}: some source relation does not map to zero in {}",
            f.target()
        )))
    }
}

/// `ker f`.
///
/// Pairs `(x, y)` with `F·x = R·y`, where `R` spans the target relations,
/// form a lattice isomorphic to the preimage of zero; the source relations
/// sit inside it as the columns `(dⱼ·eⱼ, R⁻¹·F·dⱼ·eⱼ)`, and the kernel is the
/// quotient.
pub fn kernel_of_map(f: &AbGroupMap) -> Result<FgAbelianGroup> {
    require_well_defined(f, "kernel")?;
    let rel_t = f.target_relations();
    let target_orders = f.target_orders();
    let torsion_rows: Vec<(usize, &BigInt)> = target_orders
        .iter()
        .enumerate()
        .filter_map(|(i, d)| d.as_ref().map(|d| (i, d)))
        .collect();
    let neg_rel = IntMatrix::new(
        rel_t.nrows(),
        rel_t.ncols(),
        rel_t.entries().iter().map(|x| -x).collect(),
    )?;
    let d_out = f.matrix.hstack(&neg_rel)?;

    let s = f.matrix.ncols();
    let source_orders = f.source_orders();
    let source_torsion: Vec<(usize, &BigInt)> = source_orders
        .iter()
        .enumerate()
        .filter_map(|(j, d)| d.as_ref().map(|d| (j, d)))
        .collect();
    let mut d_in = IntMatrix::zeros(s + torsion_rows.len(), source_torsion.len());
    for (col, (j, d)) in source_torsion.into_iter().enumerate() {
        d_in.set(j, col, d.clone());
        for (k, (i, dt)) in torsion_rows.iter().enumerate() {
            let y = (d * f.matrix.get(*i, j)) / *dt;
            d_in.set(s + k, col, y);
        }
    }
    homology(&d_out, &d_in)
}

/// `coker f = target / (im f + relations)`.
pub fn cokernel_of_map(f: &AbGroupMap) -> Result<FgAbelianGroup> {
    require_well_defined(f, "cokernel")?;
    Ok(cokernel_group(&f.matrix.hstack(&f.target_relations())?))
}

/// The group data of an amalgam `G₁ *_H G₂` and the two maps of its
/// Mayer-Vietoris sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamProblem {
    pub m_h: FgAbelianGroup,
    pub m_g1: FgAbelianGroup,
    pub m_g2: FgAbelianGroup,
    pub h_ab: FgAbelianGroup,
    pub g1_ab: FgAbelianGroup,
    pub g2_ab: FgAbelianGroup,
    /// `M(H) → M(G₁) ⊕ M(G₂)`; `None` when unknown.
    pub alpha: Option<AbGroupMap>,
    /// `H_ab → G₁_ab ⊕ G₂_ab`.
    pub beta: AbGroupMap,
}

/// JSON form of [`AmalgamProblem`]. Matrices are arrays of rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct AmalgamProblemJson {
    pub M_H: FgAbelianGroup,
    pub M_G1: FgAbelianGroup,
    pub M_G2: FgAbelianGroup,
    pub H_ab: FgAbelianGroup,
    pub G1_ab: FgAbelianGroup,
    pub G2_ab: FgAbelianGroup,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Vec<i64>>>,
    pub beta: Vec<Vec<i64>>,
}

fn matrix_from_rows(
    rows: &[Vec<i64>],
    expect_rows: usize,
    expect_cols: usize,
    name: &str,
) -> Result<IntMatrix> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::Mismatch(format!(
            "`{name}` must be {expect_rows}x{expect_cols} (target generators x source generators)"
        )));
    }
    let entries = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
    IntMatrix::new(expect_rows, expect_cols, entries)
}

fn matrix_to_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    use num_traits::ToPrimitive;
    (0..m.nrows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| x.to_i64().expect("entry fits in i64"))
                .collect()
        })
        .collect()
}

impl AmalgamProblem {
    /// Assembles a problem, checking matrix shapes against the groups.
    /// Without `alpha`, a trivial `M(H)` gets the zero map.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m_h: FgAbelianGroup,
        m_g1: FgAbelianGroup,
        m_g2: FgAbelianGroup,
        h_ab: FgAbelianGroup,
        g1_ab: FgAbelianGroup,
        g2_ab: FgAbelianGroup,
        alpha: Option<IntMatrix>,
        beta: IntMatrix,
    ) -> Result<Self> {
        let as_mismatch = |e: Error| match e {
            Error::InvalidArgument(m) => Error::Mismatch(m),
            other => other,
        };
        let alpha = match alpha {
            Some(a) => Some(
                AbGroupMap::into_sum(m_h.clone(), vec![m_g1.clone(), m_g2.clone()], a)
                    .map_err(as_mismatch)?,
            ),
            None if m_h.is_trivial() => Some(AbGroupMap::zero(
                m_h.clone(),
                vec![m_g1.clone(), m_g2.clone()],
            )),
            None => None,
        };
        let beta = AbGroupMap::into_sum(h_ab.clone(), vec![g1_ab.clone(), g2_ab.clone()], beta)
            .map_err(as_mismatch)?;
        Ok(AmalgamProblem {
            m_h,
            m_g1,
            m_g2,
            h_ab,
            g1_ab,
            g2_ab,
            alpha,
            beta,
        })
    }

    /// Amalgam of abelian groups given by the inclusions `H → G₁` and
    /// `H → G₂` on generators. Multipliers are exterior squares; `α` is the
    /// zero map when `M(H) = 0` and left unknown otherwise.
    pub fn from_abelian_inclusions(
        h: &FgAbelianGroup,
        g1: &FgAbelianGroup,
        g2: &FgAbelianGroup,
        into_g1: &IntMatrix,
        into_g2: &IntMatrix,
    ) -> Result<Self> {
        let beta = into_g1.vstack(into_g2).map_err(|e| match e {
            Error::InvalidArgument(m) => Error::Mismatch(m),
            other => other,
        })?;
        Self::new(
            h.exterior_square(),
            g1.exterior_square(),
            g2.exterior_square(),
            h.clone(),
            g1.clone(),
            g2.clone(),
            None,
            beta,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: AmalgamProblemJson = serde_json::from_str(text)
            .map_err(|e| Error::Mismatch(format!("malformed amalgam JSON: {e}")))?;
        Self::try_from(wire)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> AmalgamProblemJson {
        AmalgamProblemJson {
            M_H: self.m_h.clone(),
            M_G1: self.m_g1.clone(),
            M_G2: self.m_g2.clone(),
            H_ab: self.h_ab.clone(),
            G1_ab: self.g1_ab.clone(),
            G2_ab: self.g2_ab.clone(),
            alpha: self.alpha.as_ref().map(|a| matrix_to_rows(&a.matrix)),
            beta: matrix_to_rows(&self.beta.matrix),
        }
    }
}

impl TryFrom<AmalgamProblemJson> for AmalgamProblem {
    type Error = Error;

    fn try_from(w: AmalgamProblemJson) -> Result<Self> {
        let alpha = w
            .alpha
            .as_ref()
            .map(|rows| {
                matrix_from_rows(
                    rows,
                    w.M_G1.min_generators() + w.M_G2.min_generators(),
                    w.M_H.min_generators(),
                    "alpha",
                )
            })
            .transpose()?;
        let beta = matrix_from_rows(
            &w.beta,
            w.G1_ab.min_generators() + w.G2_ab.min_generators(),
            w.H_ab.min_generators(),
            "beta",
        )?;
        AmalgamProblem::new(w.M_H, w.M_G1, w.M_G2, w.H_ab, w.G1_ab, w.G2_ab, alpha, beta)
    }
}

/// The constraints on `M(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamSolution {
    /// `coker α`, the subgroup of `M(G)` coming from the factors. `None` if
    /// `α` was not known.
    pub sub: Option<FgAbelianGroup>,
    /// `ker β`, the quotient `M(G) / sub`.
    pub quot: FgAbelianGroup,
    pub determined: bool,
    /// `M(G)` when `determined`.
    pub value: Option<FgAbelianGroup>,
    pub notes: Vec<String>,
}

impl AmalgamSolution {
    /// Upper bound on `d(M(G))` valid for every extension of `quot` by `sub`.
    pub fn generator_bound(&self) -> Option<usize> {
        Some(self.sub.as_ref()?.min_generators() + self.quot.min_generators())
    }
}

pub fn solve(p: &AmalgamProblem) -> Result<AmalgamSolution> {
    if let Some(alpha) = &p.alpha {
        require_well_defined(alpha, "alpha")?;
    }
    require_well_defined(&p.beta, "beta")?;

    let mut notes = Vec::new();
    let sub = p.alpha.as_ref().map(cokernel_of_map).transpose()?;
    let quot = kernel_of_map(&p.beta)?;
    let factors = p.m_g1.direct_sum(&p.m_g2);

    if p.m_h.is_trivial() {
        notes.push(format!(
            "M(H) = 0, so M(G1) + M(G2) = {factors} embeds in M(G)"
        ));
        if p.h_ab.is_trivial() {
            notes.push("H is perfect with trivial multiplier, so M(G) = M(G1) + M(G2)".into());
        }
    }
    if sub.is_none() {
        notes.push(
            "alpha not supplied and M(H) is nontrivial; only the quotient ker(beta) is known"
                .into(),
        );
    }

    let value = match &sub {
        Some(sub) if quot.is_free() => {
            if !quot.is_trivial() {
                notes.push(format!(
                    "ker(beta) = {quot} is free, so the sequence splits"
                ));
            }
            Some(sub.direct_sum(&quot))
        }
        Some(sub) if sub.is_trivial() => {
            notes.push("coker(alpha) = 0, so M(G) = ker(beta)".into());
            Some(quot.clone())
        }
        Some(sub) => {
            notes.push(format!(
                "M(G) is an extension of {quot} by {sub}; the sequence does not determine which"
            ));
            None
        }
        None => None,
    };
    Ok(AmalgamSolution {
        sub,
        quot,
        determined: value.is_some(),
        value,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::ab;

    fn map(source: FgAbelianGroup, targets: Vec<FgAbelianGroup>, rows: &[&[i64]]) -> AbGroupMap {
        let cols = source.min_generators();
        let entries: Vec<i64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        AbGroupMap::into_sum(
            source,
            targets,
            IntMatrix::from_i64(rows.len(), cols, &entries),
        )
        .unwrap()
    }

    #[test]
    fn check_map_examples() {
        assert!(check_map(&map(ab(0, &[2]), vec![ab(0, &[4])], &[&[2]])));
        assert!(!check_map(&map(ab(0, &[2]), vec![ab(0, &[4])], &[&[1]])));
        assert!(check_map(&map(
            ab(0, &[2]),
            vec![ab(0, &[4]), ab(0, &[6])],
            &[&[2], &[3]]
        )));
        // torsion cannot map to a free generator
        assert!(!check_map(&map(ab(0, &[3]), vec![ab(1, &[])], &[&[1]])));
        assert!(check_map(&map(ab(1, &[]), vec![ab(0, &[5])], &[&[3]])));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = AbGroupMap::new(ab(0, &[2]), ab(0, &[4]), IntMatrix::zeros(2, 1)).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn kernel_examples() {
        let a = ab(1, &[6]);
        let b = ab(0, &[2, 4]);
        assert_eq!(
            kernel_of_map(&AbGroupMap::zero(a.clone(), vec![b])).unwrap(),
            a
        );
        assert!(kernel_of_map(&map(ab(1, &[]), vec![ab(1, &[])], &[&[2]]))
            .unwrap()
            .is_trivial());
        let beta = map(ab(0, &[2]), vec![ab(0, &[4]), ab(0, &[6])], &[&[2], &[3]]);
        assert!(kernel_of_map(&beta).unwrap().is_trivial());
        // Z/6 -> Z/3, 1 -> 1 has kernel Z/2
        assert_eq!(
            kernel_of_map(&map(ab(0, &[6]), vec![ab(0, &[3])], &[&[1]])).unwrap(),
            ab(0, &[2])
        );
        // Z^2 -> Z, (a, b) -> 2a - 3b has kernel Z
        assert_eq!(
            kernel_of_map(&map(ab(2, &[]), vec![ab(1, &[])], &[&[2, -3]])).unwrap(),
            ab(1, &[])
        );
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(
            cokernel_of_map(&map(ab(1, &[]), vec![ab(1, &[])], &[&[2]])).unwrap(),
            ab(0, &[2])
        );
        let b = ab(1, &[2, 4]);
        assert_eq!(
            cokernel_of_map(&AbGroupMap::zero(ab(0, &[3]), vec![b.clone()])).unwrap(),
            b
        );
        let diag = map(ab(0, &[2]), vec![ab(0, &[2]), ab(0, &[2])], &[&[1], &[1]]);
        assert_eq!(cokernel_of_map(&diag).unwrap(), ab(0, &[2]));
    }

    #[test]
    fn ill_defined_maps_are_errors() {
        let bad = map(ab(0, &[2]), vec![ab(0, &[4])], &[&[1]]);
        assert!(matches!(kernel_of_map(&bad), Err(Error::IllDefinedMap(_))));
        assert!(matches!(
            cokernel_of_map(&bad),
            Err(Error::IllDefinedMap(_))
        ));
    }

    fn problem(
        h: (FgAbelianGroup, FgAbelianGroup),
        g1: (FgAbelianGroup, FgAbelianGroup),
        g2: (FgAbelianGroup, FgAbelianGroup),
        beta: &[&[i64]],
    ) -> AmalgamProblem {
        let cols = h.1.min_generators();
        let entries: Vec<i64> = beta.iter().flat_map(|r| r.iter().copied()).collect();
        AmalgamProblem::new(
            h.0,
            g1.0,
            g2.0,
            h.1,
            g1.1,
            g2.1,
            None,
            IntMatrix::from_i64(beta.len(), cols, &entries),
        )
        .unwrap()
    }

    #[test]
    fn trivial_h() {
        let p = problem(
            (ab(0, &[]), ab(0, &[])),
            (ab(0, &[2]), ab(0, &[2, 2])),
            (ab(1, &[]), ab(2, &[])),
            &[&[], &[], &[], &[]],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.sub, Some(ab(1, &[2])));
        assert!(s.quot.is_trivial());
        assert!(s.determined);
        assert_eq!(s.value, Some(ab(1, &[2])));
        assert!(s.notes.iter().any(|n| n.contains("perfect")));
    }

    #[test]
    fn sl2z() {
        let p = problem(
            (ab(0, &[]), ab(0, &[2])),
            (ab(0, &[]), ab(0, &[4])),
            (ab(0, &[]), ab(0, &[6])),
            &[&[2], &[3]],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.sub, Some(ab(0, &[])));
        assert!(s.quot.is_trivial());
        assert!(s.determined);
        assert_eq!(s.value, Some(ab(0, &[])));
    }

    #[test]
    fn trefoil() {
        let p = problem(
            (ab(0, &[]), ab(1, &[])),
            (ab(0, &[]), ab(1, &[])),
            (ab(0, &[]), ab(1, &[])),
            &[&[2], &[-3]],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.value, Some(ab(0, &[])));
    }

    #[test]
    fn z2_over_z2() {
        let p = problem(
            (ab(0, &[]), ab(0, &[2])),
            (ab(0, &[]), ab(0, &[2])),
            (ab(0, &[]), ab(0, &[2])),
            &[&[1], &[1]],
        );
        let s = solve(&p).unwrap();
        assert!(s.quot.is_trivial());
        assert_eq!(s.value, Some(ab(0, &[])));
    }

    #[test]
    fn undetermined_extension() {
        // Z x Z/2 amalgamated with Z/2 x Z/2 over Z/2 with beta = 0: quot =
        // Z/2 and sub = M(G1) + M(G2) = Z/2 + Z/2 are both nontrivial.
        let p = problem(
            (ab(0, &[]), ab(0, &[2])),
            (ab(0, &[2]), ab(1, &[2])),
            (ab(0, &[2]), ab(0, &[2, 2])),
            &[&[0], &[0], &[0], &[0]],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.sub, Some(ab(0, &[2, 2])));
        assert_eq!(s.quot, ab(0, &[2]));
        assert!(!s.determined);
        assert_eq!(s.value, None);
        assert_eq!(s.generator_bound(), Some(3));
    }

    #[test]
    fn unknown_alpha_reports_quotient_only() {
        let p = AmalgamProblem::from_abelian_inclusions(
            &ab(2, &[]),
            &ab(3, &[]),
            &ab(2, &[]),
            &IntMatrix::from_i64(3, 2, &[1, 0, 0, 1, 0, 0]),
            &IntMatrix::from_i64(2, 2, &[1, 0, 0, 1]),
        )
        .unwrap();
        assert!(p.alpha.is_none());
        let s = solve(&p).unwrap();
        assert_eq!(s.sub, None);
        assert!(s.quot.is_trivial());
        assert!(!s.determined);
        assert_eq!(s.generator_bound(), None);
    }

    #[test]
    fn json_round_trip_and_shape_errors() {
        let text = r#"{
            "M_H": {"rank": 0, "factors": []},
            "M_G1": {"rank": 0, "factors": []},
            "M_G2": {"rank": 0, "factors": []},
            "H_ab": {"rank": 0, "factors": [2]},
            "G1_ab": {"rank": 0, "factors": [4]},
            "G2_ab": {"rank": 0, "factors": [6]},
            "beta": [[2], [3]]
        }"#;
        let p = AmalgamProblem::from_json(text).unwrap();
        assert_eq!(solve(&p).unwrap().value, Some(ab(0, &[])));
        let again = AmalgamProblem::try_from(p.to_json()).unwrap();
        assert_eq!(again, p);

        let bad_shape = text.replace("[[2], [3]]", "[[2, 1], [3, 0]]");
        assert!(matches!(
            AmalgamProblem::from_json(&bad_shape),
            Err(Error::Mismatch(_))
        ));
        let ill = text.replace("[[2], [3]]", "[[1], [3]]");
        assert!(matches!(
            solve(&AmalgamProblem::from_json(&ill).unwrap()),
            Err(Error::IllDefinedMap(_))
        ));
        assert!(matches!(
            AmalgamProblem::from_json("{"),
            Err(Error::Mismatch(_))
        ));
    }
}
