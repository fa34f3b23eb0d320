//! Brute-force group homology of small finite groups.
//!
//! The normalized bar complex of `G` with trivial integer coefficients has a
//! basis of `[g₁|…|gₙ]` with every `gᵢ ≠ e`, and boundaries
//!
//! ```text
//! ∂₂[g|h]   = [h] − [gh] + [g]
//! ∂₃[g|h|k] = [h|k] − [gh|k] + [g|hk] − [g|h]
//! ```
//!
//! where any cell with an identity coordinate is zero. Then `H₁ = G_ab` and
//! `H₂ = M(G)`. Nothing here uses the compositional rules, so the results are
//! an independent check on them.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;

use crate::abelian::FgAbelianGroup;
use crate::error::{Error, Result};
use crate::smith::{homology, homology_sparse, IntMatrix, SparseColumns};

/// Default cap on the group order accepted by the oracle.
pub const DEFAULT_CAP: usize = 24;

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

impl FiniteGroup {
    /// Validates a table (`rows[g][h] = g·h`): square, Latin, with a two-sided
    /// identity, and associative.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (g, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {g} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidTable(format!(
                    "entry {x} out of range in row {g}"
                )));
            }
            table.extend_from_slice(row);
        }
        let mut seen = vec![false; n];
        for g in 0..n {
            for (label, line) in [("row", true), ("column", false)] {
                seen.fill(false);
                for h in 0..n {
                    let x = if line {
                        table[g * n + h]
                    } else {
                        table[h * n + g]
                    };
                    if std::mem::replace(&mut seen[x], true) {
                        return Err(Error::InvalidTable(format!(
                            "{label} {g} repeats element {x} (not a Latin square)"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|h| table[e * n + h] == h && table[h * n + e] == h))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(Error::InvalidTable(format!(
                            "not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})"
                        )));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g * n + h] == identity)
                    .expect("Latin rows contain the identity")
            })
            .collect();
        Ok(FiniteGroup {
            order: n,
            table,
            identity,
            inverses,
        })
    }

    /// Reads the text table format: the order `n` on the first line, then `n`
    /// lines of `n` whitespace-separated 0-based indices.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::InvalidTable("missing order line".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::InvalidTable("first line must be the group order".into()))?;
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            let row: std::result::Result<Vec<usize>, _> =
                line.split_whitespace().map(str::parse).collect();
            rows.push(row.map_err(|_| {
                Error::InvalidTable(format!("row {i} contains a non-integer entry"))
            })?);
        }
        if rows.len() != n {
            return Err(Error::InvalidTable(format!(
                "expected {n} rows, found {}",
                rows.len()
            )));
        }
        Self::from_table(&rows)
    }

    pub fn load_table(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse_table(&text)
    }

    /// The table in the text format accepted by [`FiniteGroup::parse_table`].
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for g in 0..self.order {
            let row: Vec<String> = (0..self.order)
                .map(|h| self.mul(g, h).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// `Z/n`, with element `k` standing for `k mod n`. Panics if `n == 0`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::trusted(n, table)
    }

    /// Dihedral group of order `2n`; `r^k s^f` is element `k + n·f`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0, "dihedral group needs n ≥ 1");
        let m = 2 * n;
        let mut table = vec![0; m * m];
        for x in 0..m {
            let (a, f) = (x % n, x / n);
            for y in 0..m {
                let (b, g) = (y % n, y / n);
                // r^a s^f · r^b s^g = r^(a ± b) s^(f+g)
                let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
                table[x * m + y] = k + n * ((f + g) % 2);
            }
        }
        Self::trusted(m, table)
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`; index `4·sign + unit` with units
    /// ordered `1, i, j, k`.
    pub fn quaternion8() -> Self {
        // unit products as (sign flip, unit)
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let mut table = vec![0; 64];
        for x in 0..8 {
            for y in 0..8 {
                let (flip, u) = UNIT[x % 4][y % 4];
                table[x * 8 + y] = 4 * ((x / 4 + y / 4 + flip) % 2) + u;
            }
        }
        Self::trusted(8, table)
    }

    /// `G × H`, with `(g, h)` at index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (a, b) = (g.order, h.order);
        let n = a * b;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[x * n + y] = g.mul(x / b, y / b) * b + h.mul(x % b, y % b);
            }
        }
        Self::trusted(n, table)
    }

    /// Closure of a set of permutations. Fails once more than `cap` elements
    /// have been generated.
    pub fn from_permutations(generators: &[Permutation], cap: usize) -> Result<Self> {
        let degree = generators
            .iter()
            .map(Permutation::degree)
            .max()
            .unwrap_or(0);
        let gens: Vec<Permutation> = generators.iter().map(|p| p.extended(degree)).collect();
        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Permutation, usize> = HashMap::from([(id, 0)]);
        let mut frontier = 0;
        while frontier < elements.len() {
            let x = elements[frontier].clone();
            frontier += 1;
            for g in &gens {
                let y = g.compose(&x);
                if !index.contains_key(&y) {
                    if elements.len() == cap {
                        return Err(Error::CapacityExceeded {
                            order: format!("more than {cap}"),
                            cap,
                        });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0; n * n];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                table[i * n + j] = index[&x.compose(y)];
            }
        }
        Ok(Self::trusted(n, table))
    }

    /// Symmetric group on three points, generated by `(1 2)` and `(1 2 3)`.
    pub fn symmetric3() -> Self {
        let gens = [
            Permutation::from_cycles(&[vec![1, 2]]).expect("valid"),
            Permutation::from_cycles(&[vec![1, 2, 3]]).expect("valid"),
        ];
        Self::from_permutations(&gens, 6).expect("order 6")
    }

    /// Alternating group on four points, generated by `(1 2 3)` and
    /// `(1 2)(3 4)`.
    pub fn alternating4() -> Self {
        let gens = [
            Permutation::from_cycles(&[vec![1, 2, 3]]).expect("valid"),
            Permutation::from_cycles(&[vec![1, 2], vec![3, 4]]).expect("valid"),
        ];
        Self::from_permutations(&gens, 12).expect("order 12")
    }

    // Tables produced by the constructors above are groups by construction;
    // debug builds still run the full validation.
    fn trusted(order: usize, table: Vec<usize>) -> Self {
        if cfg!(debug_assertions) && order <= 32 {
            let rows: Vec<Vec<usize>> = table.chunks(order).map(<[usize]>::to_vec).collect();
            return Self::from_table(&rows).expect("constructor produced a group");
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|h| table[e * order + h] == h))
            .expect("identity");
        let inverses = (0..order)
            .map(|g| {
                (0..order)
                    .find(|&h| table[g * order + h] == identity)
                    .expect("inverse")
            })
            .collect();
        FiniteGroup {
            order,
            table,
            identity,
            inverses,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// The same group with element `g` renamed to `perm[g]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order;
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidArgument(
                "relabeling must be a permutation".into(),
            ));
        }
        let mut rows = vec![vec![0; n]; n];
        for g in 0..n {
            for h in 0..n {
                rows[perm[g]][perm[h]] = perm[self.mul(g, h)];
            }
        }
        Self::from_table(&rows)
    }
}

/// A permutation of `{1, …, degree}`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    /// Builds a permutation from disjoint or overlapping cycles of 1-based
    /// points; cycles are composed right to left.
    pub fn from_cycles(cycles: &[Vec<usize>]) -> Result<Self> {
        let degree = cycles.iter().flatten().copied().max().unwrap_or(0);
        let mut p = Permutation::identity(degree);
        for cycle in cycles.iter().rev() {
            if cycle.contains(&0) {
                return Err(Error::InvalidArgument(
                    "permutation points are 1-based".into(),
                ));
            }
            let mut c = Permutation::identity(degree);
            for (i, &x) in cycle.iter().enumerate() {
                if cycle[..i].contains(&x) {
                    return Err(Error::InvalidArgument(format!(
                        "point {x} repeats in a cycle"
                    )));
                }
                c.0[x - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
            p = c.compose(&p);
        }
        Ok(p)
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)`; points may be separated
    /// by spaces or commas. `()` is the identity.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        let base = text.len() - text.trim_start().len();
        while !rest.is_empty() {
            let pos = base + (text.trim().len() - rest.len());
            let Some(inner) = rest.strip_prefix('(') else {
                return Err(Error::syntax(pos, "expected `(` to open a cycle"));
            };
            let Some(close) = inner.find(')') else {
                return Err(Error::syntax(pos, "unclosed cycle"));
            };
            let points: std::result::Result<Vec<usize>, _> = inner[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(str::parse)
                .collect();
            let points =
                points.map_err(|_| Error::syntax(pos, "cycle points must be positive integers"))?;
            cycles.push(points);
            rest = inner[close + 1..].trim_start();
        }
        Self::from_cycles(&cycles)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn extended(&self, degree: usize) -> Self {
        let mut v = self.0.clone();
        v.extend(self.0.len()..degree);
        Permutation(v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.degree().max(other.degree());
        let (a, b) = (self.extended(n), other.extended(n));
        Permutation(b.0.iter().map(|&x| a.0[x]).collect())
    }

    /// Image of a 1-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.0.get(point - 1).map_or(point, |&x| x + 1)
    }
}

/// How to build a finite group for the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    /// Order `2n`.
    Dihedral(usize),
    Quaternion8,
    Symmetric3,
    Alternating4,
    Permutations(Vec<Permutation>),
    TableFile(std::path::PathBuf),
}

impl GroupSpec {
    /// Order of the group if it can be read off without building it.
    fn known_order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::Dihedral(n) => n.checked_mul(2),
            GroupSpec::Quaternion8 => Some(8),
            GroupSpec::Symmetric3 => Some(6),
            GroupSpec::Alternating4 => Some(12),
            GroupSpec::DirectProduct(a, b) => a.known_order()?.checked_mul(b.known_order()?),
            GroupSpec::Permutations(_) | GroupSpec::TableFile(_) => None,
        }
    }
}

/// Builds and validates a group, refusing anything of order above `cap`.
pub fn build_group(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    if let Some(order) = spec.known_order() {
        if order == 0 {
            return Err(Error::InvalidArgument(
                "group order must be positive".into(),
            ));
        }
        if order > cap {
            return Err(Error::CapacityExceeded {
                order: order.to_string(),
                cap,
            });
        }
    }
    let g = match spec {
        GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
        GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n),
        GroupSpec::Quaternion8 => FiniteGroup::quaternion8(),
        GroupSpec::Symmetric3 => FiniteGroup::symmetric3(),
        GroupSpec::Alternating4 => FiniteGroup::alternating4(),
        GroupSpec::DirectProduct(a, b) => {
            let (a, b) = (build_group(a, cap)?, build_group(b, cap)?);
            FiniteGroup::direct_product(&a, &b)
        }
        GroupSpec::Permutations(gens) => FiniteGroup::from_permutations(gens, cap)?,
        GroupSpec::TableFile(path) => FiniteGroup::load_table(path)?,
    };
    check_cap(&g, cap)?;
    Ok(g)
}

fn check_cap(g: &FiniteGroup, cap: usize) -> Result<()> {
    if g.order() > cap {
        return Err(Error::CapacityExceeded {
            order: g.order().to_string(),
            cap,
        });
    }
    Ok(())
}

/// Boundary maps of the normalized bar complex in degrees 2 and 3.
pub struct BarComplex<'a> {
    group: &'a FiniteGroup,
    /// Position of each non-identity element in the degree-1 basis.
    slot: Vec<Option<usize>>,
}

impl<'a> BarComplex<'a> {
    pub fn new(group: &'a FiniteGroup) -> Self {
        let mut next = 0;
        let slot = (0..group.order())
            .map(|g| {
                (g != group.identity()).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        BarComplex { group, slot }
    }

    fn m(&self) -> usize {
        self.group.order() - 1
    }

    fn cell1(&self, g: usize) -> Option<usize> {
        self.slot[g]
    }

    fn cell2(&self, g: usize, h: usize) -> Option<usize> {
        Some(self.slot[g]? * self.m() + self.slot[h]?)
    }

    /// `∂₂ : C₂ → C₁`, dense, `(n−1) × (n−1)²`.
    pub fn d2(&self) -> IntMatrix {
        let m = self.m();
        let mut d = IntMatrix::zeros(m, m * m);
        let nonid: Vec<usize> = (0..self.group.order())
            .filter(|&g| self.slot[g].is_some())
            .collect();
        for &g in &nonid {
            for &h in &nonid {
                let col = self.cell2(g, h).expect("non-identity");
                let gh = self.group.mul(g, h);
                for (cell, sign) in [(self.cell1(h), 1), (self.cell1(gh), -1), (self.cell1(g), 1)] {
                    if let Some(r) = cell {
                        let v = d.get(r, col) + sign;
                        d.set(r, col, v);
                    }
                }
            }
        }
        d
    }

    /// `∂₃ : C₃ → C₂`, column-sparse, `(n−1)² × (n−1)³`.
    pub fn d3(&self) -> SparseColumns {
        let m = self.m();
        let mut d = SparseColumns::new(m * m);
        let nonid: Vec<usize> = (0..self.group.order())
            .filter(|&g| self.slot[g].is_some())
            .collect();
        let mul = |a, b| self.group.mul(a, b);
        for &g in &nonid {
            for &h in &nonid {
                for &k in &nonid {
                    let terms = [
                        (self.cell2(h, k), 1),
                        (self.cell2(mul(g, h), k), -1),
                        (self.cell2(g, mul(h, k)), 1),
                        (self.cell2(g, h), -1),
                    ];
                    d.push_column(
                        terms
                            .into_iter()
                            .filter_map(|(c, s)| c.map(|c| (c, BigInt::from(s)))),
                    )
                    .expect("rows in range");
                }
            }
        }
        d
    }
}

/// `H₁(G; Z) = G_ab` from the bar complex.
pub fn bar_h1(g: &FiniteGroup) -> FgAbelianGroup {
    let bar = BarComplex::new(g);
    let d1 = IntMatrix::zeros(1, g.order() - 1);
    homology(&d1, &bar.d2()).expect("∂₁ = 0 composes with anything")
}

/// `H₂(G; Z) = M(G)` from the bar complex, for `|G| ≤ cap`.
pub fn bar_h2(g: &FiniteGroup, cap: usize) -> Result<FgAbelianGroup> {
    check_cap(g, cap)?;
    let bar = BarComplex::new(g);
    Ok(homology_sparse(&bar.d2(), &bar.d3()).expect("bar complex satisfies ∂₂∂₃ = 0"))
}
