//! Correspondences between products of quadrics.
//!
//! A [`Correspondence`] from `X` to `Y` is a cycle on `X x Y` together with the
//! position where the factors of `X` end. Composition uses the rule
//!
//! ```text
//! (b' x c) o (a x b) = deg(b b') a x c
//! ```
//!
//! extended bilinearly. This module also provides the diagonal class, the
//! factor exchange, derivative operators, support filters, multiplication
//! along the diagonal and the isotropic reduction maps `f_t` and `g_t`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{self, BasisElement, ChowError, Cycle, FactorSymbol, Kind};
use crate::profile::QuadricProfile;

/// Errors raised by correspondence operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error("split {split} is outside 0..={arity}")]
    InvalidSplit { split: usize, arity: usize },
    #[error("degree underflow: input has dimension {found}, but the operator needs at least {needed}")]
    DegreeUnderflow { needed: usize, found: usize },
    #[error("level {t} is not below the height {h}")]
    InvalidLevel { t: usize, h: usize },
}

impl CorrError {
    /// Stable machine-readable name of the error variant.
    pub fn code(&self) -> &'static str {
        match self {
            CorrError::Chow(e) => e.code(),
            CorrError::InvalidSplit { .. } => "InvalidSplit",
            CorrError::DegreeUnderflow { .. } => "DegreeUnderflow",
            CorrError::InvalidLevel { .. } => "InvalidLevel",
        }
    }
}

fn mismatch(msg: impl Into<String>) -> CorrError {
    CorrError::Chow(ChowError::ContextMismatch(msg.into()))
}

/// A cycle on `X x Y` with the boundary between the two sides recorded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCorrespondence", into = "RawCorrespondence")]
pub struct Correspondence {
    cycle: Cycle,
    split: usize,
}

#[derive(Serialize, Deserialize)]
struct RawCorrespondence {
    context: Vec<QuadricProfile>,
    support: Vec<BasisElement>,
    split: usize,
}

impl TryFrom<RawCorrespondence> for Correspondence {
    type Error = CorrError;
    fn try_from(raw: RawCorrespondence) -> Result<Self, Self::Error> {
        let cycle = Cycle::from_elements(raw.context, raw.support)?;
        Correspondence::new(cycle, raw.split)
    }
}

impl From<Correspondence> for RawCorrespondence {
    fn from(c: Correspondence) -> Self {
        RawCorrespondence {
            context: c.cycle.context().to_vec(),
            support: c.cycle.support().iter().cloned().collect(),
            split: c.split,
        }
    }
}

impl Correspondence {
    pub fn new(cycle: Cycle, split: usize) -> Result<Self, CorrError> {
        if split > cycle.arity() {
            return Err(CorrError::InvalidSplit {
                split,
                arity: cycle.arity(),
            });
        }
        Ok(Correspondence { cycle, split })
    }

    /// A correspondence from `X` to `X` for a single quadric `X`.
    pub fn on_square(cycle: Cycle) -> Result<Self, CorrError> {
        if cycle.arity() != 2 {
            return Err(mismatch(format!(
                "expected a cycle on X x X, found {} factors",
                cycle.arity()
            )));
        }
        Ok(Correspondence { cycle, split: 1 })
    }

    /// Parses the text notation over `X x X`.
    pub fn parse_square(text: &str, profile: &QuadricProfile) -> Result<Self, CorrError> {
        let cycle = Cycle::parse(text, vec![profile.clone(), profile.clone()])?;
        Self::on_square(cycle)
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    pub fn into_cycle(self) -> Cycle {
        self.cycle
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn left_context(&self) -> &[QuadricProfile] {
        &self.cycle.context()[..self.split]
    }

    pub fn right_context(&self) -> &[QuadricProfile] {
        &self.cycle.context()[self.split..]
    }

    pub fn is_zero(&self) -> bool {
        self.cycle.is_zero()
    }

    pub fn to_text(&self) -> String {
        self.cycle.to_text()
    }

    fn with_cycle(&self, cycle: Cycle) -> Correspondence {
        Correspondence {
            cycle,
            split: self.split,
        }
    }

    /// Sum over F2 of two correspondences with the same sides.
    pub fn add(&self, other: &Correspondence) -> Result<Correspondence, CorrError> {
        if self.split != other.split {
            return Err(mismatch("operands have different splits"));
        }
        Ok(self.with_cycle(self.cycle.add(&other.cycle)?))
    }
}

/// `g o f` for `f: X -> Y` and `g: Y -> Z`.
pub fn compose(f: &Correspondence, g: &Correspondence) -> Result<Correspondence, CorrError> {
    if f.right_context() != g.left_context() {
        return Err(mismatch("the target of f is not the source of g"));
    }
    let middle = f.right_context();
    let mut context = f.left_context().to_vec();
    context.extend_from_slice(g.right_context());
    let mut support = BTreeSet::new();
    for x in f.cycle.support() {
        let (alpha, beta) = x.factors().split_at(f.split);
        let beta = BasisElement::new(beta.to_vec());
        for y in g.cycle.support() {
            let (beta2, gamma) = y.factors().split_at(g.split);
            let beta2 = BasisElement::new(beta2.to_vec());
            let paired = chow::mul_elements(&beta, &beta2, middle).is_some_and(|p| chow::degree_element(&p));
            if paired {
                let mut e = alpha.to_vec();
                e.extend_from_slice(gamma);
                let e = BasisElement::new(e);
                if !support.remove(&e) {
                    support.insert(e);
                }
            }
        }
    }
    Ok(Correspondence {
        cycle: Cycle::from_parts(context, support),
        split: f.split,
    })
}

/// The class of the diagonal of `X x X`.
///
/// In the case `s = 0`, `dim = 2 mod 4` the two families of middle-dimensional
/// planes share the symbol `L(r-1)`, so `l_{r-1}` pairs to 1 with itself. The
/// extra term `H(r-1) x H(r-1)` compensates, and the sum is then a two-sided
/// identity for [`compose`].
pub fn diagonal_class(profile: &QuadricProfile) -> Correspondence {
    let ctx = vec![profile.clone(), profile.clone()];
    let r = profile.r();
    let mut elements = Vec::with_capacity(2 * r + 1);
    for i in 0..r {
        elements.push(BasisElement::new(vec![FactorSymbol::h(i), FactorSymbol::l(i)]));
        elements.push(BasisElement::new(vec![FactorSymbol::l(i), FactorSymbol::h(i)]));
    }
    if chow::has_exceptional_square(profile) {
        elements.push(BasisElement::new(vec![FactorSymbol::h(r - 1), FactorSymbol::h(r - 1)]));
    }
    let cycle = Cycle::from_elements(ctx, elements).expect("diagonal indices are in range");
    Correspondence { cycle, split: 1 }
}

/// Exchanges the two sides of a correspondence.
pub fn transpose(f: &Correspondence) -> Correspondence {
    let mut context = f.right_context().to_vec();
    context.extend_from_slice(f.left_context());
    let support = f
        .cycle
        .support()
        .iter()
        .map(|e| {
            let (a, b) = e.factors().split_at(f.split);
            let mut v = b.to_vec();
            v.extend_from_slice(a);
            BasisElement::new(v)
        })
        .collect();
    Correspondence {
        cycle: Cycle::from_parts(context, support),
        split: f.cycle.arity() - f.split,
    }
}

/// The derivative operator `D^{k1,k2}`: multiplication by `h^{k1} x h^{k2}` on
/// a homogeneous element of `R_{X x X}` of dimension at least `d_X + k1 + k2`.
pub fn derivative(k1: usize, k2: usize, f: &Correspondence) -> Result<Correspondence, CorrError> {
    if f.cycle.arity() != 2 {
        return Err(mismatch("derivative operators act on X x X"));
    }
    let ctx = f.cycle.context();
    let Some(dim) = f.cycle.homogeneous_dimension()? else {
        return Ok(f.clone());
    };
    let needed = ctx[0].quadric_dim() + k1 + k2;
    if dim < needed {
        return Err(CorrError::DegreeUnderflow { needed, found: dim });
    }
    if k1 >= ctx[0].r() || k2 >= ctx[1].r() {
        return Ok(f.with_cycle(Cycle::zero(ctx.to_vec())));
    }
    let factor = Cycle::basis(ctx.to_vec(), vec![FactorSymbol::h(k1), FactorSymbol::h(k2)])?;
    Ok(f.with_cycle(chow::mul(&f.cycle, &factor)?))
}

/// Drops every pure-`H` tuple from the support.
pub fn essential(f: &Correspondence) -> Correspondence {
    let support = f.cycle.support().iter().filter(|e| !e.is_pure_h()).cloned().collect();
    f.with_cycle(Cycle::from_parts(f.cycle.context().to_vec(), support))
}

/// The sum of the basis tuples involved in both operands.
pub fn cap(f: &Correspondence, g: &Correspondence) -> Result<Correspondence, CorrError> {
    if f.cycle.context() != g.cycle.context() || f.split != g.split {
        return Err(mismatch("cap needs operands on the same product"));
    }
    let support = f.cycle.support().intersection(g.cycle.support()).cloned().collect();
    Ok(f.with_cycle(Cycle::from_parts(f.cycle.context().to_vec(), support)))
}

/// Whether every tuple involved in `g` is involved in `f`.
pub fn contains(f: &Correspondence, g: &Correspondence) -> Result<bool, CorrError> {
    if f.cycle.context() != g.cycle.context() || f.split != g.split {
        return Err(mismatch("contains needs operands on the same product"));
    }
    Ok(g.cycle.support().is_subset(f.cycle.support()))
}

/// Multiplication along the diagonal `X^m -> X^{2m}`: each tuple is cut into
/// two halves which are multiplied componentwise.
pub fn diagonal_mult(c: &Cycle) -> Result<Cycle, CorrError> {
    let ctx = c.context();
    if ctx.is_empty() || !ctx.len().is_multiple_of(2) || ctx.iter().any(|p| *p != ctx[0]) {
        return Err(mismatch("diagonal multiplication needs 2m copies of one quadric"));
    }
    let m = ctx.len() / 2;
    let half = &ctx[..m];
    let mut out = Cycle::zero(half.to_vec());
    for e in c.support() {
        let (a, b) = e.factors().split_at(m);
        let a = BasisElement::new(a.to_vec());
        let b = BasisElement::new(b.to_vec());
        if let Some(p) = chow::mul_elements(&a, &b, half) {
            out.toggle(p);
        }
    }
    Ok(out)
}

fn check_level(profile: &QuadricProfile, t: usize) -> Result<usize, CorrError> {
    if t >= profile.height() {
        return Err(CorrError::InvalidLevel { t, h: profile.height() });
    }
    Ok(profile.j(t))
}

fn check_copies(c: &Cycle, profile: &QuadricProfile) -> Result<(), CorrError> {
    if c.context().iter().any(|p| p != profile) {
        return Err(mismatch(format!("expected every factor to be {profile}")));
    }
    Ok(())
}

/// The reduction `f_t`: from copies of `X` to copies of the `t`-th kernel
/// quadric. Every index is lowered by `w = j_t`; tuples with an index below
/// `w` are dropped.
pub fn reduce_f(profile: &QuadricProfile, t: usize, c: &Cycle) -> Result<Cycle, CorrError> {
    let w = check_level(profile, t)?;
    check_copies(c, profile)?;
    let kernel = profile.kernel(t).expect("level checked");
    let mut out = Cycle::zero(vec![kernel; c.arity()]);
    for e in c.support() {
        let shifted = e
            .factors()
            .iter()
            .map(|f| {
                (f.index >= w).then(|| FactorSymbol {
                    kind: f.kind,
                    index: f.index - w,
                })
            })
            .collect::<Option<Vec<_>>>();
        if let Some(v) = shifted {
            out.toggle(BasisElement::new(v));
        }
    }
    Ok(out)
}

/// The reduction `g_t`: from copies of the `t`-th kernel quadric to copies of
/// `X`, raising every index by `w = j_t`.
pub fn reduce_g(profile: &QuadricProfile, t: usize, c: &Cycle) -> Result<Cycle, CorrError> {
    let w = check_level(profile, t)?;
    let kernel = profile.kernel(t).expect("level checked");
    check_copies(c, &kernel)?;
    let mut out = Cycle::zero(vec![profile.clone(); c.arity()]);
    for e in c.support() {
        let v = e
            .factors()
            .iter()
            .map(|f| FactorSymbol {
                kind: f.kind,
                index: f.index + w,
            })
            .collect();
        out.toggle(BasisElement::new(v));
    }
    Ok(out)
}

/// The element `sum_i h^{i+j} x l_i + l_{i+j} x h^i` on `X x Y`, where `Y` is
/// the anisotropic part of an isotropic quadric `X` of Witt index `j`.
pub fn isotropic_link(
    profile: &QuadricProfile,
    kernel: &QuadricProfile,
    j: usize,
) -> Result<Correspondence, CorrError> {
    if kernel.r() + j != profile.r() || kernel.s() != profile.s() {
        return Err(mismatch("the kernel does not match the isotropic quadric"));
    }
    let mut elements = Vec::new();
    for i in 0..kernel.r() {
        elements.push(BasisElement::new(vec![FactorSymbol::h(i + j), FactorSymbol::l(i)]));
        elements.push(BasisElement::new(vec![FactorSymbol::l(i + j), FactorSymbol::h(i)]));
    }
    let cycle = Cycle::from_elements(vec![profile.clone(), kernel.clone()], elements)?;
    Correspondence::new(cycle, 1)
}

/// Whether a tuple on `X x X` is `h^i x l_{i+j}` or `l_{i+j} x h^i` for some
/// `j >= 0`; returns `(i, j)`.
pub fn shell_coordinates(e: &BasisElement) -> Option<(usize, usize)> {
    match e.factors() {
        [a, b] => match (a.kind, b.kind) {
            (Kind::H, Kind::L) if b.index >= a.index => Some((a.index, b.index - a.index)),
            (Kind::L, Kind::H) if a.index >= b.index => Some((b.index, a.index - b.index)),
            _ => None,
        },
        _ => None,
    }
}
