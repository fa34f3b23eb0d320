//! Schur multipliers of group expressions built from cyclic groups, abelian
//! groups and small finite groups with free and direct products.
//!
//! The calculator applies three rules recursively:
//!
//! * `M(cyclic) = 0`
//! * `M(G₁ * G₂) = M(G₁) ⊕ M(G₂)`
//! * `M(G₁ × G₂) = M(G₁) ⊕ M(G₂) ⊕ (G₁_ab ⊗ G₂_ab)`
//!
//! Finite-table leaves are handed to the bar-resolution oracle. Every rule
//! firing is recorded in a [`DerivationTrace`].
//!
//! ```
//! use schur::compose::{parse_expr, schur_multiplier};
//!
//! let e = parse_expr("Z/4 x Z/6 * Z").unwrap();
//! let (m, trace) = schur_multiplier(&e).unwrap();
//! assert_eq!(m.to_string(), "Z/2");
//! assert!(!trace.steps().is_empty());
//! ```

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::abelian::{CyclicSummand, FgAbelianGroup};
use crate::bar_oracle::{bar_h1, bar_h2, build_group, FiniteGroup, GroupSpec, DEFAULT_CAP};
use crate::error::{Error, Result};

/// A finite group leaf together with the name it was written as.
#[derive(Clone, Debug)]
pub struct FiniteLeaf {
    name: String,
    group: Arc<FiniteGroup>,
}

impl FiniteLeaf {
    pub fn new(name: impl Into<String>, group: FiniteGroup) -> Self {
        FiniteLeaf {
            name: name.into(),
            group: Arc::new(group),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
}

impl PartialEq for FiniteLeaf {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.group == other.group
    }
}

impl Eq for FiniteLeaf {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    /// `Z/n`, `n ≥ 1`.
    CyclicFinite(u64),
    /// `Z`.
    CyclicInfinite,
    AbelianLeaf(FgAbelianGroup),
    FreeProduct(Box<GroupExpr>, Box<GroupExpr>),
    DirectProduct(Box<GroupExpr>, Box<GroupExpr>),
    FiniteLeaf(FiniteLeaf),
}

impl GroupExpr {
    pub fn free_product(a: GroupExpr, b: GroupExpr) -> Self {
        GroupExpr::FreeProduct(Box::new(a), Box::new(b))
    }

    pub fn direct_product(a: GroupExpr, b: GroupExpr) -> Self {
        GroupExpr::DirectProduct(Box::new(a), Box::new(b))
    }

    /// Group order if the expression denotes a finite group it can compute
    /// directly (no free products), else `None`.
    pub fn finite_order(&self) -> Option<BigInt> {
        match self {
            GroupExpr::CyclicFinite(n) => Some(BigInt::from(*n)),
            GroupExpr::CyclicInfinite | GroupExpr::FreeProduct(..) => None,
            GroupExpr::AbelianLeaf(a) => a.order(),
            GroupExpr::DirectProduct(a, b) => Some(a.finite_order()? * b.finite_order()?),
            GroupExpr::FiniteLeaf(l) => Some(BigInt::from(l.group.order())),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::CyclicFinite(n) => write!(f, "Z/{n}"),
            GroupExpr::CyclicInfinite => f.write_str("Z"),
            GroupExpr::AbelianLeaf(a) => write!(f, "Ab({a})"),
            GroupExpr::FiniteLeaf(l) => f.write_str(&l.name),
            GroupExpr::FreeProduct(a, b) => {
                // left-associative: only a right-hand free product needs parens
                write!(f, "{a} * ")?;
                match **b {
                    GroupExpr::FreeProduct(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            GroupExpr::DirectProduct(a, b) => {
                match **a {
                    GroupExpr::FreeProduct(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                f.write_str(" x ")?;
                match **b {
                    GroupExpr::FreeProduct(..) | GroupExpr::DirectProduct(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
        }
    }
}

/// Parses a group expression, building finite leaves with the default order
/// cap.
///
/// Grammar (whitespace insignificant):
///
/// ```text
/// expr    = product ('*' product)*        free product, left-associative
/// product = atom ('x' atom)*              direct product, binds tighter
/// atom    = 'Z' | 'Z/' n | '1' | '(' expr ')' | 'Ab(' abelian ')'
///         | 'D' n | 'Q8' | 'S3' | 'A4' | 'table:' path
/// ```
///
/// `D n` is the dihedral group of order `2n`, so `D4` has order 8. `Ab(...)`
/// takes an abelian group in the rendering used for results, for example
/// `Ab(Z^2 + Z/6)`. A `table:` path runs until whitespace or `)`.
pub fn parse_expr(text: &str) -> Result<GroupExpr> {
    parse_expr_with_cap(text, DEFAULT_CAP)
}

pub fn parse_expr_with_cap(text: &str, cap: usize) -> Result<GroupExpr> {
    let mut p = ExprParser {
        chars: text.chars().collect(),
        pos: 0,
        cap,
    };
    let e = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(Error::syntax(p.pos, format!("unexpected `{c}`")));
    }
    Ok(e)
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
    cap: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<GroupExpr> {
        let mut e = self.product()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('*') {
                return Ok(e);
            }
            self.pos += 1;
            e = GroupExpr::free_product(e, self.product()?);
        }
    }

    fn product(&mut self) -> Result<GroupExpr> {
        let mut e = self.atom()?;
        loop {
            self.skip_ws();
            let is_times = self.peek() == Some('x')
                && !self
                    .chars
                    .get(self.pos + 1)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_');
            if !is_times {
                return Ok(e);
            }
            self.pos += 1;
            e = GroupExpr::direct_product(e, self.atom()?);
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected a number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse()
            .map_err(|_| Error::syntax(start, format!("number `{digits}` out of range")))
    }

    fn finite(&self, name: String, spec: GroupSpec) -> Result<GroupExpr> {
        let group = build_group(&spec, self.cap)?;
        Ok(GroupExpr::FiniteLeaf(FiniteLeaf::new(name, group)))
    }

    fn atom(&mut self) -> Result<GroupExpr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => return Err(Error::syntax(start, "expected a group, found end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(Error::syntax(self.pos, "expected `)`"));
                }
                self.pos += 1;
                return Ok(e);
            }
            Some('1') => {
                self.pos += 1;
                return Ok(GroupExpr::CyclicFinite(1));
            }
            Some(c) if !c.is_ascii_alphabetic() => {
                return Err(Error::syntax(
                    start,
                    format!("expected a group, found `{c}`"),
                ));
            }
            Some(_) => {}
        }
        let word = self.word();
        match word.as_str() {
            "Z" => {
                self.skip_ws();
                if self.peek() != Some('/') {
                    return Ok(GroupExpr::CyclicInfinite);
                }
                self.pos += 1;
                let at = self.pos;
                let n = self.number()?;
                if n == 0 {
                    return Err(Error::syntax(at, "cyclic order must be at least 1"));
                }
                Ok(GroupExpr::CyclicFinite(n))
            }
            "Q8" => self.finite(word, GroupSpec::Quaternion8),
            "S3" => self.finite(word, GroupSpec::Symmetric3),
            "A4" => self.finite(word, GroupSpec::Alternating4),
            "Ab" => {
                self.skip_ws();
                if self.peek() != Some('(') {
                    return Err(Error::syntax(self.pos, "expected `(` after `Ab`"));
                }
                let open = self.pos + 1;
                let Some(len) = self.chars[open..].iter().position(|&c| c == ')') else {
                    return Err(Error::syntax(self.pos, "unclosed `Ab(`"));
                };
                let inner: String = self.chars[open..open + len].iter().collect();
                self.pos = open + len + 1;
                let group = inner.parse::<FgAbelianGroup>().map_err(|e| match e {
                    Error::Syntax { position, message } => Error::Syntax {
                        position: position + open,
                        message,
                    },
                    other => other,
                })?;
                Ok(GroupExpr::AbelianLeaf(group))
            }
            "table" => {
                if self.peek() != Some(':') {
                    return Err(Error::syntax(self.pos, "expected `:` after `table`"));
                }
                self.pos += 1;
                let from = self.pos;
                while self.peek().is_some_and(|c| !c.is_whitespace() && c != ')') {
                    self.pos += 1;
                }
                if from == self.pos {
                    return Err(Error::syntax(from, "expected a file path after `table:`"));
                }
                let path: String = self.chars[from..self.pos].iter().collect();
                self.finite(
                    format!("table:{path}"),
                    GroupSpec::TableFile(PathBuf::from(path)),
                )
            }
            w if w.len() > 1
                && w.starts_with('D')
                && w[1..].bytes().all(|b| b.is_ascii_digit()) =>
            {
                let n: usize = w[1..]
                    .parse()
                    .map_err(|_| Error::syntax(start + 1, "dihedral index out of range"))?;
                if n == 0 {
                    return Err(Error::syntax(
                        start + 1,
                        "dihedral index must be at least 1",
                    ));
                }
                self.finite(word, GroupSpec::Dihedral(n))
            }
            _ => Err(Error::syntax(start, format!("unknown group `{word}`"))),
        }
    }
}

/// `G_ab` of an expression. Free and direct products both abelianize to the
/// direct sum.
pub fn abelianize_expr(e: &GroupExpr) -> FgAbelianGroup {
    match e {
        GroupExpr::CyclicFinite(n) => FgAbelianGroup::cyclic(*n),
        GroupExpr::CyclicInfinite => FgAbelianGroup::free(1),
        GroupExpr::AbelianLeaf(a) => a.clone(),
        GroupExpr::FreeProduct(a, b) | GroupExpr::DirectProduct(a, b) => {
            abelianize_expr(a).direct_sum(&abelianize_expr(b))
        }
        GroupExpr::FiniteLeaf(l) => bar_h1(&l.group),
    }
}

/// Which rule produced a trace step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `M(cyclic) = 0`
    Cyclic,
    /// `M(G₁ * G₂) = M(G₁) ⊕ M(G₂)`
    FreeProduct,
    /// `M(G₁ × G₂) = M(G₁) ⊕ M(G₂) ⊕ (G₁_ab ⊗ G₂_ab)`
    DirectProduct,
    /// Bar-resolution `H₂` of a finite table.
    BarOracle,
    /// `M(A) = Λ²(A)` for abelian `A`, used to confirm an expanded leaf.
    AbelianClosedForm,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Cyclic => "cyclic",
            Rule::FreeProduct => "free product",
            Rule::DirectProduct => "direct product",
            Rule::BarOracle => "bar oracle",
            Rule::AbelianClosedForm => "abelian closed form",
        })
    }
}

/// A labelled intermediate value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermValue {
    pub label: String,
    pub value: FgAbelianGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    /// The subexpression the rule was applied to.
    pub expr: String,
    /// The terms combined by the rule, in order.
    pub terms: Vec<TermValue>,
    pub result: FgAbelianGroup,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] M({}) = ", self.rule, self.expr)?;
        if !self.terms.is_empty() {
            let terms: Vec<String> = self.terms.iter().map(|t| t.label.clone()).collect();
            let values: Vec<String> = self
                .terms
                .iter()
                .map(|t| format!("({})", t.value))
                .collect();
            write!(f, "{} = {} = ", terms.join(" + "), values.join(" + "))?;
        }
        write!(f, "{}", self.result)
    }
}

/// Rule firings in evaluation order (children before parents).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DerivationTrace(Vec<TraceStep>);

impl DerivationTrace {
    pub fn steps(&self) -> &[TraceStep] {
        &self.0
    }

    pub fn uses(&self, rule: Rule) -> bool {
        self.0.iter().any(|s| s.rule == rule)
    }
}

/// `M(e)` with the default oracle cap for finite leaves.
pub fn schur_multiplier(e: &GroupExpr) -> Result<(FgAbelianGroup, DerivationTrace)> {
    schur_multiplier_with_cap(e, DEFAULT_CAP)
}

pub fn schur_multiplier_with_cap(
    e: &GroupExpr,
    cap: usize,
) -> Result<(FgAbelianGroup, DerivationTrace)> {
    let mut trace = DerivationTrace::default();
    let m = Evaluator {
        cap,
        trace: &mut trace,
    }
    .eval(e)?;
    Ok((m, trace))
}

struct Evaluator<'t> {
    cap: usize,
    trace: &'t mut DerivationTrace,
}

/// Result of evaluating a subexpression: multiplier and abelianization.
struct Eval {
    m: FgAbelianGroup,
    ab: FgAbelianGroup,
}

impl Evaluator<'_> {
    fn push(&mut self, rule: Rule, expr: String, terms: Vec<TermValue>, result: &FgAbelianGroup) {
        self.trace.0.push(TraceStep {
            rule,
            expr,
            terms,
            result: result.clone(),
        });
    }

    fn eval(&mut self, e: &GroupExpr) -> Result<FgAbelianGroup> {
        Ok(self.eval_full(e)?.m)
    }

    fn cyclic(&mut self, name: String, ab: FgAbelianGroup) -> Eval {
        let m = FgAbelianGroup::trivial();
        self.push(Rule::Cyclic, name, Vec::new(), &m);
        Eval { m, ab }
    }

    fn direct(&mut self, name: String, l: (&str, Eval), r: (&str, Eval)) -> Eval {
        let tensor = l.1.ab.tensor(&r.1.ab);
        let m = l.1.m.direct_sum(&r.1.m).direct_sum(&tensor);
        let terms = vec![
            TermValue {
                label: format!("M({})", l.0),
                value: l.1.m,
            },
            TermValue {
                label: format!("M({})", r.0),
                value: r.1.m,
            },
            TermValue {
                label: format!("{}_ab ⊗ {}_ab", paren(l.0), paren(r.0)),
                value: tensor,
            },
        ];
        self.push(Rule::DirectProduct, name, terms, &m);
        Eval {
            m,
            ab: l.1.ab.direct_sum(&r.1.ab),
        }
    }

    fn eval_full(&mut self, e: &GroupExpr) -> Result<Eval> {
        Ok(match e {
            GroupExpr::CyclicFinite(n) => self.cyclic(e.to_string(), FgAbelianGroup::cyclic(*n)),
            GroupExpr::CyclicInfinite => self.cyclic(e.to_string(), FgAbelianGroup::free(1)),
            GroupExpr::AbelianLeaf(a) => self.abelian_leaf(a),
            GroupExpr::FreeProduct(a, b) => {
                let (l, r) = (self.eval_full(a)?, self.eval_full(b)?);
                let m = l.m.direct_sum(&r.m);
                let terms = vec![
                    TermValue {
                        label: format!("M({a})"),
                        value: l.m,
                    },
                    TermValue {
                        label: format!("M({b})"),
                        value: r.m,
                    },
                ];
                self.push(Rule::FreeProduct, e.to_string(), terms, &m);
                Eval {
                    m,
                    ab: l.ab.direct_sum(&r.ab),
                }
            }
            GroupExpr::DirectProduct(a, b) => {
                let (l, r) = (self.eval_full(a)?, self.eval_full(b)?);
                let (a, b) = (a.to_string(), b.to_string());
                self.direct(e.to_string(), (&a, l), (&b, r))
            }
            GroupExpr::FiniteLeaf(leaf) => {
                let m = bar_h2(&leaf.group, self.cap)?;
                self.push(Rule::BarOracle, leaf.name.clone(), Vec::new(), &m);
                Eval {
                    m,
                    ab: bar_h1(&leaf.group),
                }
            }
        })
    }

    /// Expands `A = C₁ × C₂ × …` over canonical summands (free first, then
    /// invariant factors ascending), folds with the direct-product rule, then
    /// confirms against `Λ²(A)`.
    fn abelian_leaf(&mut self, a: &FgAbelianGroup) -> Eval {
        let leaf_name = format!("Ab({a})");
        let mut acc: Option<(String, Eval)> = None;
        for s in a.summands() {
            let (name, ab) = match &s {
                CyclicSummand::Infinite => ("Z".to_string(), FgAbelianGroup::free(1)),
                CyclicSummand::Finite(d) => (
                    format!("Z/{d}"),
                    FgAbelianGroup::normalize(0, [d.clone()]).expect("positive"),
                ),
            };
            let next = self.cyclic(name.clone(), ab);
            acc = Some(match acc {
                None => (name, next),
                Some((acc_name, acc_eval)) => {
                    let joined = format!("{acc_name} x {name}");
                    let ev = self.direct(joined.clone(), (&acc_name, acc_eval), (&name, next));
                    (joined, ev)
                }
            });
        }
        let folded = acc.map_or_else(FgAbelianGroup::trivial, |(_, ev)| ev.m);
        let closed = a.exterior_square();
        debug_assert_eq!(folded, closed, "direct-product fold disagrees with Λ²");
        self.push(
            Rule::AbelianClosedForm,
            leaf_name,
            vec![TermValue {
                label: "Λ²".into(),
                value: closed.clone(),
            }],
            &folded,
        );
        Eval {
            m: folded,
            ab: a.clone(),
        }
    }
}

fn paren(s: &str) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// Multiplication table for an expression that is a direct product of finite
/// leaves, for handing to the bar oracle. Free products and infinite factors
/// are rejected with [`Error::NotFinite`].
pub fn to_finite_group(e: &GroupExpr, cap: usize) -> Result<FiniteGroup> {
    let order = e.finite_order().ok_or_else(|| {
        Error::NotFinite(format!(
            "`{e}` contains a free product or an infinite factor; the oracle only handles finite groups"
        ))
    })?;
    if order > BigInt::from(cap) {
        return Err(Error::CapacityExceeded {
            order: order.to_string(),
            cap,
        });
    }
    Ok(build_finite(e))
}

fn build_finite(e: &GroupExpr) -> FiniteGroup {
    let cyclic = |d: &BigInt| FiniteGroup::cyclic(d.to_usize().expect("order within cap"));
    match e {
        GroupExpr::CyclicFinite(n) => FiniteGroup::cyclic(*n as usize),
        GroupExpr::AbelianLeaf(a) => a
            .invariant_factors()
            .iter()
            .fold(FiniteGroup::cyclic(1), |g, d| {
                FiniteGroup::direct_product(&g, &cyclic(d))
            }),
        GroupExpr::DirectProduct(a, b) => {
            FiniteGroup::direct_product(&build_finite(a), &build_finite(b))
        }
        GroupExpr::FiniteLeaf(l) => l.group.as_ref().clone(),
        GroupExpr::CyclicInfinite | GroupExpr::FreeProduct(..) => {
            unreachable!("finite_order rejected infinite expressions")
        }
    }
}
