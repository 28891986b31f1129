//! The graded F2-algebra `R_X` spanned by the classes `h^i` and `l_i` on a
//! product of quadrics, with its multiplication, degree map, external product
//! and Steenrod operations.
//!
//! Each factor of a product carries a [`QuadricProfile`]. For a factor with
//! first type entry `r` the symbols are `H(i)` (codimension `i`) and `L(i)`
//! (dimension `i`) with `0 <= i < r`. The single-factor table is
//!
//! ```text
//! h^i h^j = h^{i+j}       if i + j < r, else 0
//! h^i l_j = l_{j-i}       if i <= j,    else 0
//! l_i l_j = l_0           if dim = 2 mod 4, s = 0 and i = j = (dim - 2)/2, else 0
//! S^j(h^i) = C(i, j) h^{i+j}           if i + j < r, else 0
//! S^j(l_i) = C(dim - i - 1, j) l_{i-j} if j <= i,    else 0
//! ```
//!
//! Coefficients live in F2, so a [`Cycle`] is just a set of basis tuples.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::QuadricProfile;

/// Errors raised by cycle arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("symbol {symbol} is out of range for a factor with r = {r}")]
    IndexOutOfRange { symbol: FactorSymbol, r: usize },
    #[error("basis tuple has {found} factors but the context has {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("cycle is not homogeneous")]
    Inhomogeneous,
    #[error("cannot parse cycle text: {0}")]
    Parse(String),
}

impl ChowError {
    /// Stable machine-readable name of the error variant.
    pub fn code(&self) -> &'static str {
        match self {
            ChowError::ContextMismatch(_) => "ContextMismatch",
            ChowError::IndexOutOfRange { .. } => "IndexOutOfRange",
            ChowError::ArityMismatch { .. } => "ArityMismatch",
            ChowError::Inhomogeneous => "Inhomogeneous",
            ChowError::Parse(_) => "Parse",
        }
    }
}

/// Binomial coefficient modulo 2, via Lucas' theorem.
pub fn binom_mod2(n: usize, k: usize) -> bool {
    k <= n && (k & !n) == 0
}

/// Whether `l_i l_j` can be nonzero: only for `l_{r-1}^2` when `s = 0` and
/// `dim = 2 mod 4`.
pub fn has_exceptional_square(profile: &QuadricProfile) -> bool {
    profile.s() == 0 && profile.dim() % 4 == 2
}

/// Kind of a per-factor symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    H,
    L,
}

/// `H(i)` (the class `h^i`) or `L(i)` (the class `l_i`) on one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorSymbol {
    pub kind: Kind,
    #[serde(rename = "i")]
    pub index: usize,
}

impl FactorSymbol {
    pub const fn h(index: usize) -> Self {
        FactorSymbol { kind: Kind::H, index }
    }

    pub const fn l(index: usize) -> Self {
        FactorSymbol { kind: Kind::L, index }
    }

    /// Dimension of the class on a quadric of dimension `d_X`.
    pub fn dimension(self, profile: &QuadricProfile) -> usize {
        match self.kind {
            Kind::H => profile.quadric_dim() - self.index,
            Kind::L => self.index,
        }
    }

    /// Whether the index lies in `[0, r)` for this factor.
    pub fn in_range(self, profile: &QuadricProfile) -> bool {
        self.index < profile.r()
    }
}

impl fmt::Display for FactorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::H => write!(f, "h{}", self.index),
            Kind::L => write!(f, "l{}", self.index),
        }
    }
}

/// A standard basis tuple, one symbol per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisElement(pub Vec<FactorSymbol>);

impl BasisElement {
    pub fn new(factors: Vec<FactorSymbol>) -> Self {
        BasisElement(factors)
    }

    pub fn factors(&self) -> &[FactorSymbol] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Total dimension over the given context.
    pub fn dimension(&self, context: &[QuadricProfile]) -> usize {
        self.0.iter().zip(context).map(|(f, p)| f.dimension(p)).sum()
    }

    /// Whether every factor is an `H` symbol.
    pub fn is_pure_h(&self) -> bool {
        self.0.iter().all(|f| f.kind == Kind::H)
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Product of two symbols on a single factor, or `None` for zero.
pub fn mul_factor(a: FactorSymbol, b: FactorSymbol, profile: &QuadricProfile) -> Option<FactorSymbol> {
    let r = profile.r();
    match (a.kind, b.kind) {
        (Kind::H, Kind::H) => (a.index + b.index < r).then(|| FactorSymbol::h(a.index + b.index)),
        (Kind::H, Kind::L) => (a.index <= b.index).then(|| FactorSymbol::l(b.index - a.index)),
        (Kind::L, Kind::H) => (b.index <= a.index).then(|| FactorSymbol::l(a.index - b.index)),
        (Kind::L, Kind::L) => {
            let middle = (profile.dim() - 2) / 2;
            (has_exceptional_square(profile) && a.index == middle && b.index == middle).then_some(FactorSymbol::l(0))
        }
    }
}

/// `S^j` of a single symbol, or `None` for zero.
pub fn steenrod_factor(j: usize, a: FactorSymbol, profile: &QuadricProfile) -> Option<FactorSymbol> {
    match a.kind {
        Kind::H => (a.index + j < profile.r() && binom_mod2(a.index, j)).then(|| FactorSymbol::h(a.index + j)),
        Kind::L => (j <= a.index && binom_mod2(profile.dim() - a.index - 1, j)).then(|| FactorSymbol::l(a.index - j)),
    }
}

/// An element of `R_X` for `X` the product of the context's quadrics.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCycle", into = "RawCycle")]
pub struct Cycle {
    context: Vec<QuadricProfile>,
    support: BTreeSet<BasisElement>,
}

#[derive(Serialize, Deserialize)]
struct RawCycle {
    context: Vec<QuadricProfile>,
    support: Vec<BasisElement>,
}

impl TryFrom<RawCycle> for Cycle {
    type Error = ChowError;
    fn try_from(raw: RawCycle) -> Result<Self, Self::Error> {
        let mut c = Cycle::zero(raw.context);
        for e in raw.support {
            c.check_element(&e)?;
            c.toggle(e);
        }
        Ok(c)
    }
}

impl From<Cycle> for RawCycle {
    fn from(c: Cycle) -> Self {
        RawCycle {
            context: c.context,
            support: c.support.into_iter().collect(),
        }
    }
}

impl Cycle {
    /// The zero cycle over a context.
    pub fn zero(context: Vec<QuadricProfile>) -> Self {
        Cycle {
            context,
            support: BTreeSet::new(),
        }
    }

    /// A single basis tuple.
    pub fn basis(context: Vec<QuadricProfile>, element: Vec<FactorSymbol>) -> Result<Self, ChowError> {
        Self::from_elements(context, [BasisElement(element)])
    }

    /// Sum over F2 of the given tuples; repeated tuples cancel.
    pub fn from_elements<I>(context: Vec<QuadricProfile>, elements: I) -> Result<Self, ChowError>
    where
        I: IntoIterator<Item = BasisElement>,
    {
        let mut c = Cycle::zero(context);
        for e in elements {
            c.check_element(&e)?;
            c.toggle(e);
        }
        Ok(c)
    }

    /// The multiplicative identity: the all-`H(0)` tuple.
    pub fn one(context: Vec<QuadricProfile>) -> Self {
        let e = BasisElement(vec![FactorSymbol::h(0); context.len()]);
        let mut c = Cycle::zero(context);
        c.toggle(e);
        c
    }

    fn check_element(&self, e: &BasisElement) -> Result<(), ChowError> {
        if e.arity() != self.context.len() {
            return Err(ChowError::ArityMismatch {
                expected: self.context.len(),
                found: e.arity(),
            });
        }
        for (sym, p) in e.0.iter().zip(&self.context) {
            if !sym.in_range(p) {
                return Err(ChowError::IndexOutOfRange { symbol: *sym, r: p.r() });
            }
        }
        Ok(())
    }

    /// Adds one basis tuple (over F2). The caller guarantees it is in range.
    pub(crate) fn toggle(&mut self, e: BasisElement) {
        if !self.support.remove(&e) {
            self.support.insert(e);
        }
    }

    pub(crate) fn from_parts(context: Vec<QuadricProfile>, support: BTreeSet<BasisElement>) -> Self {
        Cycle { context, support }
    }

    pub fn context(&self) -> &[QuadricProfile] {
        &self.context
    }

    pub fn support(&self) -> &BTreeSet<BasisElement> {
        &self.support
    }

    pub fn arity(&self) -> usize {
        self.context.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains_element(&self, e: &BasisElement) -> bool {
        self.support.contains(e)
    }

    /// The common dimension of all support tuples; `None` for zero.
    pub fn homogeneous_dimension(&self) -> Result<Option<usize>, ChowError> {
        let mut dims = self.support.iter().map(|e| e.dimension(&self.context));
        let Some(first) = dims.next() else {
            return Ok(None);
        };
        if dims.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(ChowError::Inhomogeneous)
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_dimension().is_ok()
    }

    fn same_context(&self, other: &Cycle) -> Result<(), ChowError> {
        if self.context != other.context {
            return Err(ChowError::ContextMismatch(
                "operands live on different products of quadrics".into(),
            ));
        }
        Ok(())
    }

    /// Sum over F2.
    pub fn add(&self, other: &Cycle) -> Result<Cycle, ChowError> {
        self.same_context(other)?;
        let support = self.support.symmetric_difference(&other.support).cloned().collect();
        Ok(Cycle::from_parts(self.context.clone(), support))
    }

    /// Parses the text notation `h0*l2 + h1*l1` (`0` for the zero cycle).
    pub fn parse(text: &str, context: Vec<QuadricProfile>) -> Result<Self, ChowError> {
        let trimmed = text.trim();
        let mut c = Cycle::zero(context);
        if trimmed == "0" {
            return Ok(c);
        }
        for term in trimmed.split('+') {
            let factors = term.split('*').map(parse_symbol).collect::<Result<Vec<_>, _>>()?;
            let e = BasisElement(factors);
            c.check_element(&e)?;
            c.toggle(e);
        }
        Ok(c)
    }

    /// Renders the text notation; the inverse of [`Cycle::parse`].
    pub fn to_text(&self) -> String {
        if self.support.is_empty() {
            return "0".to_string();
        }
        self.support
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_symbol(token: &str) -> Result<FactorSymbol, ChowError> {
    let t = token.trim();
    let mut chars = t.chars();
    let kind = match chars.next() {
        Some('h') | Some('H') => Kind::H,
        Some('l') | Some('L') => Kind::L,
        _ => return Err(ChowError::Parse(format!("expected h<i> or l<i>, found `{t}`"))),
    };
    let index = chars
        .as_str()
        .parse::<usize>()
        .map_err(|_| ChowError::Parse(format!("bad index in `{t}`")))?;
    Ok(FactorSymbol { kind, index })
}

/// Componentwise product of two basis tuples, or `None` if some factor vanishes.
pub fn mul_elements(a: &BasisElement, b: &BasisElement, context: &[QuadricProfile]) -> Option<BasisElement> {
    a.0.iter()
        .zip(&b.0)
        .zip(context)
        .map(|((x, y), p)| mul_factor(*x, *y, p))
        .collect::<Option<Vec<_>>>()
        .map(BasisElement)
}

/// Product in `R_X`, extended bilinearly from the componentwise table.
pub fn mul(a: &Cycle, b: &Cycle) -> Result<Cycle, ChowError> {
    a.same_context(b)?;
    let mut out = Cycle::zero(a.context.clone());
    for x in &a.support {
        for y in &b.support {
            if let Some(z) = mul_elements(x, y, &a.context) {
                out.toggle(z);
            }
        }
    }
    Ok(out)
}

/// Degree: the coefficient of the all-`L(0)` tuple.
pub fn degree(c: &Cycle) -> bool {
    let point = BasisElement(vec![FactorSymbol::l(0); c.arity()]);
    c.support.contains(&point)
}

/// Degree of a single tuple.
pub fn degree_element(e: &BasisElement) -> bool {
    e.0.iter().all(|f| *f == FactorSymbol::l(0))
}

/// `S^j` on a cycle. On products, the total operation is the sum over all
/// ways to write `j = j_1 + ... + j_m` of the factorwise operations.
pub fn steenrod(j: usize, c: &Cycle) -> Cycle {
    let mut out = Cycle::zero(c.context.clone());
    let mut scratch = Vec::with_capacity(c.arity());
    for e in &c.support {
        steenrod_rec(j, e, &c.context, 0, &mut scratch, &mut out);
    }
    out
}

fn steenrod_rec(
    remaining: usize,
    e: &BasisElement,
    context: &[QuadricProfile],
    pos: usize,
    scratch: &mut Vec<FactorSymbol>,
    out: &mut Cycle,
) {
    if pos == e.arity() {
        if remaining == 0 {
            out.toggle(BasisElement(scratch.clone()));
        }
        return;
    }
    let last = pos + 1 == e.arity();
    let range = if last { remaining..=remaining } else { 0..=remaining };
    for jk in range {
        if let Some(sym) = steenrod_factor(jk, e.0[pos], &context[pos]) {
            scratch.push(sym);
            steenrod_rec(remaining - jk, e, context, pos + 1, scratch, out);
            scratch.pop();
        }
    }
}

/// External product: concatenation of factor tuples, distributed bilinearly.
pub fn external_product(a: &Cycle, b: &Cycle) -> Cycle {
    let mut context = a.context.clone();
    context.extend(b.context.iter().cloned());
    let mut out = Cycle::zero(context);
    for x in &a.support {
        for y in &b.support {
            let mut f = x.0.clone();
            f.extend(y.0.iter().copied());
            out.toggle(BasisElement(f));
        }
    }
    out
}

/// All standard basis tuples over a context, in canonical order.
pub fn all_basis_elements(context: &[QuadricProfile]) -> Vec<BasisElement> {
    let mut out = vec![Vec::new()];
    for p in context {
        let mut next = Vec::new();
        for prefix in &out {
            for kind in [Kind::H, Kind::L] {
                for index in 0..p.r() {
                    let mut f: Vec<FactorSymbol> = prefix.clone();
                    f.push(FactorSymbol { kind, index });
                    next.push(f);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(BasisElement).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(dim: usize, r: usize, s: usize) -> QuadricProfile {
        QuadricProfile::new(dim, r, s, (0..=r).collect()).unwrap()
    }

    #[test]
    fn factor_table() {
        let p = prof(8, 3, 2);
        assert_eq!(
            mul_factor(FactorSymbol::h(1), FactorSymbol::h(1), &p),
            Some(FactorSymbol::h(2))
        );
        assert_eq!(mul_factor(FactorSymbol::h(2), FactorSymbol::h(1), &p), None);
        assert_eq!(
            mul_factor(FactorSymbol::h(2), FactorSymbol::l(2), &p),
            Some(FactorSymbol::l(0))
        );
        assert_eq!(mul_factor(FactorSymbol::l(2), FactorSymbol::l(2), &p), None);
        let q = QuadricProfile::new(6, 3, 0, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(
            mul_factor(FactorSymbol::l(2), FactorSymbol::l(2), &q),
            Some(FactorSymbol::l(0))
        );
        assert_eq!(mul_factor(FactorSymbol::l(1), FactorSymbol::l(2), &q), None);
    }

    #[test]
    fn product_examples() {
        let p = prof(6, 2, 2);
        let ctx = vec![p.clone(), p.clone()];
        let a = Cycle::parse("h0*l1", ctx.clone()).unwrap();
        let b = Cycle::parse("h1*h0", ctx.clone()).unwrap();
        assert_eq!(mul(&a, &b).unwrap().to_text(), "h1*l1");
        assert_eq!(mul(&a, &Cycle::one(ctx.clone())).unwrap(), a);
        let q = prof(8, 3, 2);
        let c = Cycle::parse("h1 + h2", vec![q.clone()]).unwrap();
        let h1 = Cycle::parse("h1", vec![q.clone()]).unwrap();
        assert_eq!(mul(&c, &h1).unwrap().to_text(), "h2");
    }

    #[test]
    fn degree_examples() {
        let p = prof(6, 2, 2);
        assert!(degree(&Cycle::parse("l0*l0", vec![p.clone(), p.clone()]).unwrap()));
        assert!(!degree(&Cycle::parse("h1", vec![p.clone()]).unwrap()));
        assert!(degree(&Cycle::parse("l0 + l1", vec![p]).unwrap()));
    }

    #[test]
    fn steenrod_examples() {
        let p = prof(8, 3, 2);
        let h1 = Cycle::parse("h1", vec![p.clone()]).unwrap();
        assert_eq!(steenrod(1, &h1).to_text(), "h2");
        let l1 = Cycle::parse("l1", vec![p.clone()]).unwrap();
        assert!(steenrod(1, &l1).is_zero());
        assert_eq!(steenrod(0, &l1), l1);
    }

    #[test]
    fn external_examples() {
        let p = prof(8, 3, 2);
        let a = Cycle::parse("h0 + h1", vec![p.clone()]).unwrap();
        let b = Cycle::parse("l0", vec![p.clone()]).unwrap();
        assert_eq!(external_product(&a, &b).to_text(), "h0*l0 + h1*l0");
        let z = Cycle::zero(vec![p.clone()]);
        assert!(external_product(&z, &b).is_zero());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let p = prof(8, 3, 2);
        let ctx = vec![p.clone(), p.clone()];
        let c = Cycle::parse("h0*l2 + h1*l1", ctx.clone()).unwrap();
        assert_eq!(Cycle::parse(&c.to_text(), ctx.clone()).unwrap(), c);
        assert_eq!(Cycle::parse("h1*l1 + h1*l1", ctx.clone()).unwrap().to_text(), "0");
        assert!(matches!(
            Cycle::parse("h3*l0", ctx.clone()),
            Err(ChowError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            Cycle::parse("h0", ctx.clone()),
            Err(ChowError::ArityMismatch { .. })
        ));
        assert!(matches!(Cycle::parse("x0*l0", ctx), Err(ChowError::Parse(_))));
    }

    #[test]
    fn homogeneity() {
        let p = prof(8, 3, 2);
        let c = Cycle::parse("h0 + l0", vec![p.clone()]).unwrap();
        assert_eq!(c.homogeneous_dimension(), Err(ChowError::Inhomogeneous));
        let c = Cycle::parse("h1*l0 + l1*h2", vec![p.clone(), p]).unwrap();
        assert_eq!(c.homogeneous_dimension(), Ok(Some(5)));
    }

    #[test]
    fn json_shape() {
        let p = prof(6, 2, 2);
        let c = Cycle::parse("h0*l1", vec![p.clone(), p]).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(
            v["support"],
            serde_json::json!([[{"kind":"H","i":0},{"kind":"L","i":1}]])
        );
        let back: Cycle = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
