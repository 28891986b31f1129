//! The symbol set `Lambda(X)`, partitions of it, and the machinery that
//! decides which partitions are compatible with known necessary conditions.
//!
//! For a quadric `X` of dimension `d_X` with first type entry `r`, the set
//! `Lambda(X)` has `2r` symbols: `i_lo` for `0 <= i < r` and `i^up` for
//! `d_X - r < i <= d_X`. The engine never computes the decomposition of any
//! particular form. It reports the partitions that are not excluded by the
//! selected rules for the given dimension, type and splitting pattern.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{Cycle, FactorSymbol};
use crate::corr::Correspondence;
use crate::profile::{ProfileError, QuadricProfile};

mod closed;
mod diagram;
mod enumerate;
mod rules;

pub use closed::{mdt_height_one, mdt_isotropic_lift, mdt_pfister_neighbour, mdt_strongly_excellent};
pub use diagram::{
    render_ascii, render_svg, shell_diagram, shell_diagram_for_pattern, DiagramNode, ShellDiagram, Side,
};
pub use enumerate::{enumerate_mdt, forced_classes, DEFAULT_MAX_R};
pub use rules::{
    check_partition, dual_pairs, exc_pairs, forced_connections, vpn_pairs, EndpointVariant, Provenance, RuleId,
    RuleSet, Violation,
};

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MdtError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("symbol {symbol} lies outside Lambda(X) for d_X = {d}, r = {r}")]
    OutOfWindow { symbol: LambdaSymbol, d: usize, r: usize },
    #[error("not a partition of Lambda(X): {0}")]
    NotAPartition(String),
    #[error("r = {r} exceeds the enumeration bound {max_r}")]
    BoundExceeded { r: usize, max_r: usize },
    #[error("profile has height {h}, not 1")]
    NotHeightOne { h: usize },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("isotropic lift needs w >= 1")]
    InvalidLift,
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
}

impl MdtError {
    /// Stable machine-readable name of the error variant.
    pub fn code(&self) -> &'static str {
        match self {
            MdtError::Profile(e) => e.code(),
            MdtError::OutOfWindow { .. } => "OutOfWindow",
            MdtError::NotAPartition(_) => "NotAPartition",
            MdtError::BoundExceeded { .. } => "BoundExceeded",
            MdtError::NotHeightOne { .. } => "NotHeightOne",
            MdtError::ArityMismatch(_) => "ArityMismatch",
            MdtError::InvalidLift => "InvalidLift",
            MdtError::UnknownRule(_) => "UnknownRule",
        }
    }
}

/// Lower or upper symbol kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Lo,
    Up,
}

/// A symbol `i_lo` or `i^up`. Lower symbols sort before upper ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LambdaSymbol {
    pub kind: SymbolKind,
    #[serde(rename = "i")]
    pub index: usize,
}

impl LambdaSymbol {
    pub const fn lo(index: usize) -> Self {
        LambdaSymbol {
            kind: SymbolKind::Lo,
            index,
        }
    }

    pub const fn up(index: usize) -> Self {
        LambdaSymbol {
            kind: SymbolKind::Up,
            index,
        }
    }

    pub fn is_lo(self) -> bool {
        self.kind == SymbolKind::Lo
    }

    /// The shift `[j]`, adding `j` to the index.
    pub fn shifted(self, j: usize) -> Self {
        LambdaSymbol {
            kind: self.kind,
            index: self.index + j,
        }
    }

    /// Whether the symbol lies in `Lambda(X)` for the given `d_X` and `r`.
    pub fn in_window(self, d: usize, r: usize) -> bool {
        match self.kind {
            SymbolKind::Lo => self.index < r,
            SymbolKind::Up => self.index <= d && self.index + r > d,
        }
    }
}

impl fmt::Display for LambdaSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Lo => write!(f, "{}_lo", self.index),
            SymbolKind::Up => write!(f, "{}^up", self.index),
        }
    }
}

/// The `2r` symbols of `Lambda(X)`, lower ones first.
pub fn lambda_set(profile: &QuadricProfile) -> Vec<LambdaSymbol> {
    lambda_set_for(profile.quadric_dim(), profile.r())
}

pub(crate) fn lambda_set_for(d: usize, r: usize) -> Vec<LambdaSymbol> {
    let mut out: Vec<LambdaSymbol> = (0..r).map(LambdaSymbol::lo).collect();
    out.extend((d + 1 - r..=d).map(LambdaSymbol::up));
    out
}

/// The idempotent basis tuple attached to a symbol: `h^i x l_i` for `i_lo`
/// and `l_{d_X-i} x h^{d_X-i}` for `i^up`.
pub fn alpha_cycle(symbol: LambdaSymbol, profile: &QuadricProfile) -> Result<Correspondence, MdtError> {
    let d = profile.quadric_dim();
    if !symbol.in_window(d, profile.r()) {
        return Err(MdtError::OutOfWindow {
            symbol,
            d,
            r: profile.r(),
        });
    }
    let factors = match symbol.kind {
        SymbolKind::Lo => vec![FactorSymbol::h(symbol.index), FactorSymbol::l(symbol.index)],
        SymbolKind::Up => vec![FactorSymbol::l(d - symbol.index), FactorSymbol::h(d - symbol.index)],
    };
    let cycle = Cycle::basis(vec![profile.clone(), profile.clone()], factors).expect("window checked");
    Ok(Correspondence::on_square(cycle).expect("two factors"))
}

/// The sum of `alpha_cycle` over a set of symbols.
pub fn alpha_block(block: &[LambdaSymbol], profile: &QuadricProfile) -> Result<Correspondence, MdtError> {
    let mut acc = Correspondence::on_square(Cycle::zero(vec![profile.clone(), profile.clone()])).expect("two factors");
    for s in block {
        acc = acc.add(&alpha_cycle(*s, profile)?).expect("same context");
    }
    Ok(acc)
}

/// A partition of `Lambda(X)` into blocks, held in canonical order: each
/// block sorted, blocks sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawPartition")]
pub struct MdtPartition {
    blocks: Vec<Vec<LambdaSymbol>>,
}

#[derive(Deserialize)]
struct RawPartition {
    blocks: Vec<Vec<LambdaSymbol>>,
}

impl From<RawPartition> for MdtPartition {
    fn from(raw: RawPartition) -> Self {
        MdtPartition::new(raw.blocks)
    }
}

impl PartialOrd for MdtPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MdtPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.blocks.cmp(&other.blocks)
    }
}

impl MdtPartition {
    /// Builds a partition in canonical order. Coverage is checked separately
    /// by [`MdtPartition::validate`].
    pub fn new(blocks: Vec<Vec<LambdaSymbol>>) -> Self {
        let mut blocks: Vec<Vec<LambdaSymbol>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        blocks.sort();
        MdtPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<LambdaSymbol>] {
        &self.blocks
    }

    /// Symbols of all blocks, in canonical order.
    pub fn symbols(&self) -> Vec<LambdaSymbol> {
        let mut v: Vec<LambdaSymbol> = self.blocks.iter().flatten().copied().collect();
        v.sort();
        v
    }

    /// Checks that the blocks are nonempty, disjoint and cover exactly the
    /// window for `d_X` and `r`.
    pub fn validate_for(&self, d: usize, r: usize) -> Result<(), MdtError> {
        if self.blocks.iter().any(|b| b.is_empty()) {
            return Err(MdtError::NotAPartition("empty block".into()));
        }
        let mut seen = BTreeSet::new();
        for s in self.blocks.iter().flatten() {
            if !s.in_window(d, r) {
                return Err(MdtError::OutOfWindow { symbol: *s, d, r });
            }
            if !seen.insert(*s) {
                return Err(MdtError::NotAPartition(format!("symbol {s} appears twice")));
            }
        }
        if seen.len() != 2 * r {
            let missing: Vec<String> = lambda_set_for(d, r)
                .into_iter()
                .filter(|s| !seen.contains(s))
                .map(|s| s.to_string())
                .collect();
            return Err(MdtError::NotAPartition(format!(
                "missing symbols {}",
                missing.join(", ")
            )));
        }
        Ok(())
    }

    pub fn validate(&self, profile: &QuadricProfile) -> Result<(), MdtError> {
        self.validate_for(profile.quadric_dim(), profile.r())
    }

    /// Index of the block containing a symbol.
    pub fn block_index(&self) -> BTreeMap<LambdaSymbol, usize> {
        let mut m = BTreeMap::new();
        for (k, b) in self.blocks.iter().enumerate() {
            for s in b {
                m.insert(*s, k);
            }
        }
        m
    }

    /// Whether two symbols lie in the same block.
    pub fn connected(&self, x: LambdaSymbol, y: LambdaSymbol) -> bool {
        self.blocks.iter().any(|b| b.contains(&x) && b.contains(&y))
    }

    /// The block containing `0_lo`.
    pub fn upper_block(&self) -> Option<&[LambdaSymbol]> {
        self.blocks
            .iter()
            .find(|b| b.contains(&LambdaSymbol::lo(0)))
            .map(|b| b.as_slice())
    }

    /// Every symbol shifted by `j`.
    pub fn shifted(&self, j: usize) -> MdtPartition {
        MdtPartition::new(
            self.blocks
                .iter()
                .map(|b| b.iter().map(|s| s.shifted(j)).collect())
                .collect(),
        )
    }
}

impl fmt::Display for MdtPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str("{")?;
            for (i, s) in b.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{s}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// `a(Lambda)`: the smallest lower index of a block.
pub fn block_a(block: &[LambdaSymbol]) -> Option<usize> {
    block.iter().filter(|s| s.is_lo()).map(|s| s.index).min()
}

/// `b(Lambda)`: the largest upper index of a block.
pub fn block_b(block: &[LambdaSymbol]) -> Option<usize> {
    block.iter().filter(|s| !s.is_lo()).map(|s| s.index).max()
}
