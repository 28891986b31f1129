//! Discrete invariants of anisotropic, nondefective, nonquasilinear quadratic
//! forms in characteristic 2.
//!
//! A form of dimension `dim = 2r + s` is described here only by its type
//! `(r, s)` and its nondefective splitting pattern `0 = j_0 < j_1 < ... < j_h = r`.
//! The higher indices are `i_t = j_t - j_{t-1}`. All constructors validate the
//! first-index bound
//!
//! ```text
//! i_t <= 2^{v2((dim - 2 j_{t-1}) - i_t)}
//! ```
//!
//! against each kernel form, so every [`QuadricProfile`] value is internally
//! consistent. Everything in this module is a pure function of its inputs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building or analysing profiles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("dimension {dim} does not equal 2r + s for r = {r}, s = {s} (r must be at least 1)")]
    DimMismatch { dim: usize, r: usize, s: usize },
    #[error("invalid splitting pattern: {0}")]
    PatternInvalid(String),
    #[error("step {step} has i = {i}, exceeding the 2-adic bound {bound} for a kernel of dimension {kernel_dim}")]
    StepViolatesI1Bound {
        step: usize,
        i: usize,
        bound: usize,
        kernel_dim: usize,
    },
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("dimension {dim} with s = {s} cannot be a Pfister neighbour: r + s = {sum} exceeds 2^n = {two_n}")]
    NotNeighbourEligible {
        dim: usize,
        s: usize,
        sum: usize,
        two_n: usize,
    },
    #[error("unknown i1 rule `{0}` (expected base, singular or conjectural)")]
    UnknownRule(String),
}

impl ProfileError {
    /// Stable machine-readable name of the error variant.
    pub fn code(&self) -> &'static str {
        match self {
            ProfileError::DimMismatch { .. } => "DimMismatch",
            ProfileError::PatternInvalid(_) => "PatternInvalid",
            ProfileError::StepViolatesI1Bound { .. } => "StepViolatesI1Bound",
            ProfileError::ConstraintViolated(_) => "ConstraintViolated",
            ProfileError::NotNeighbourEligible { .. } => "NotNeighbourEligible",
            ProfileError::UnknownRule(_) => "UnknownRule",
        }
    }
}

/// 2-adic valuation of a positive integer.
///
/// # Panics
/// Panics on zero, which has no finite valuation.
pub fn v2(n: usize) -> u32 {
    assert!(n > 0, "v2 is undefined at 0");
    n.trailing_zeros()
}

/// Largest power of 2 dividing the positive integer `n`.
pub fn two_part(n: usize) -> usize {
    1usize << v2(n)
}

/// The integer `n` with `2^n < dim <= 2^{n+1}`, for `dim >= 2`.
pub fn pfister_exponent(dim: usize) -> u32 {
    assert!(dim >= 2, "pfister_exponent needs dim >= 2");
    // ceil(log2(dim)) - 1
    (usize::BITS - (dim - 1).leading_zeros()) - 1
}

/// Whether step `i` is allowed for an anisotropic kernel of dimension `kernel_dim`
/// by the first-index theorem: `i <= 2^{v2(kernel_dim - i)}`.
pub fn step_within_i1_bound(kernel_dim: usize, i: usize) -> bool {
    i >= 1 && i < kernel_dim && i <= two_part(kernel_dim - i)
}

/// The discrete fingerprint of an anisotropic form: dimension, type and
/// nondefective splitting pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct QuadricProfile {
    dim: usize,
    r: usize,
    s: usize,
    pattern: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawProfile {
    dim: usize,
    r: usize,
    s: usize,
    pattern: Vec<usize>,
}

impl TryFrom<RawProfile> for QuadricProfile {
    type Error = ProfileError;
    fn try_from(raw: RawProfile) -> Result<Self, Self::Error> {
        QuadricProfile::new(raw.dim, raw.r, raw.s, raw.pattern)
    }
}

impl From<QuadricProfile> for RawProfile {
    fn from(p: QuadricProfile) -> Self {
        RawProfile {
            dim: p.dim,
            r: p.r,
            s: p.s,
            pattern: p.pattern,
        }
    }
}

impl QuadricProfile {
    /// Validates and builds a profile.
    ///
    /// Checks `dim = 2r + s` with `r >= 1`, that the pattern runs strictly
    /// upward from 0 to `r`, and that every step respects the first-index bound
    /// of its kernel form (of dimension `dim - 2 j_{t-1}`).
    pub fn new(dim: usize, r: usize, s: usize, pattern: Vec<usize>) -> Result<Self, ProfileError> {
        if r == 0 || dim != 2 * r + s {
            return Err(ProfileError::DimMismatch { dim, r, s });
        }
        if pattern.len() < 2 {
            return Err(ProfileError::PatternInvalid(
                "pattern needs at least the entries 0 and r".into(),
            ));
        }
        if pattern[0] != 0 {
            return Err(ProfileError::PatternInvalid(format!(
                "pattern must start at 0, found {}",
                pattern[0]
            )));
        }
        if *pattern.last().unwrap() != r {
            return Err(ProfileError::PatternInvalid(format!(
                "pattern must end at r = {r}, found {}",
                pattern.last().unwrap()
            )));
        }
        if pattern.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ProfileError::PatternInvalid(
                "pattern must be strictly increasing".into(),
            ));
        }
        for (t, w) in pattern.windows(2).enumerate() {
            let kernel_dim = dim - 2 * w[0];
            let i = w[1] - w[0];
            if !step_within_i1_bound(kernel_dim, i) {
                return Err(ProfileError::StepViolatesI1Bound {
                    step: t + 1,
                    i,
                    bound: two_part(kernel_dim - i),
                    kernel_dim,
                });
            }
        }
        Ok(QuadricProfile { dim, r, s, pattern })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// The pattern `[j_0, ..., j_h]`.
    pub fn pattern(&self) -> &[usize] {
        &self.pattern
    }

    /// Nondefective height `h`.
    pub fn height(&self) -> usize {
        self.pattern.len() - 1
    }

    /// `j_t` for `0 <= t <= h`.
    pub fn j(&self, t: usize) -> usize {
        self.pattern[t]
    }

    /// Higher index `i_t = j_t - j_{t-1}` for `1 <= t <= h`.
    pub fn i(&self, t: usize) -> usize {
        self.pattern[t] - self.pattern[t - 1]
    }

    /// All higher indices `[i_1, ..., i_h]`.
    pub fn steps(&self) -> Vec<usize> {
        self.pattern.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Dimension `d_X = dim - 2` of the projective quadric.
    pub fn quadric_dim(&self) -> usize {
        self.dim - 2
    }

    /// Izhboldin dimension `dim - i_1`.
    pub fn izhboldin_dim(&self) -> usize {
        self.dim - self.pattern[1]
    }

    /// The shell `t` (with `1 <= t <= h`) such that `j_{t-1} <= index < j_t`.
    pub fn shell_of(&self, index: usize) -> Option<usize> {
        (1..self.pattern.len()).find(|&t| self.pattern[t - 1] <= index && index < self.pattern[t])
    }

    /// Profile of the `t`-th kernel form (`0 <= t < h`): type `(r - j_t, s)`
    /// with the remaining part of the pattern shifted down by `j_t`.
    pub fn kernel(&self, t: usize) -> Option<QuadricProfile> {
        if t >= self.height() {
            return None;
        }
        let w = self.pattern[t];
        let pattern = self.pattern[t..].iter().map(|j| j - w).collect();
        Some(QuadricProfile {
            dim: self.dim - 2 * w,
            r: self.r - w,
            s: self.s,
            pattern,
        })
    }
}

impl fmt::Display for QuadricProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(dim {}, type ({},{}), pattern {:?})",
            self.dim, self.r, self.s, self.pattern
        )
    }
}

/// Izhboldin dimension of a profile.
pub fn izhboldin_dim(profile: &QuadricProfile) -> usize {
    profile.izhboldin_dim()
}

/// Largest `i >= 1` with `i <= 2^{v2(dim - i)}`.
pub fn i1_max_by_theorem(dim: usize) -> usize {
    assert!(dim >= 2, "i1_max_by_theorem needs dim >= 2");
    (1..dim).filter(|&i| i <= two_part(dim - i)).max().unwrap_or(1)
}

/// A filter on the possible values of the first higher index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum I1Rule {
    /// The 2-adic first-index theorem, `i <= r`, and the odd-cofactor lemma.
    Base,
    /// The theorem for forms whose first index is at least `s`.
    Singular,
    /// Consequences of the excellent-connection conjecture for degenerate forms.
    Conjectural,
}

impl I1Rule {
    pub fn name(self) -> &'static str {
        match self {
            I1Rule::Base => "base",
            I1Rule::Singular => "singular",
            I1Rule::Conjectural => "conjectural",
        }
    }

    /// Whether the rule is a theorem (as opposed to conditional on a conjecture).
    pub fn is_proven(self) -> bool {
        !matches!(self, I1Rule::Conjectural)
    }
}

impl FromStr for I1Rule {
    type Err = ProfileError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "base" => Ok(I1Rule::Base),
            "singular" => Ok(I1Rule::Singular),
            "conjectural" => Ok(I1Rule::Conjectural),
            other => Err(ProfileError::UnknownRule(other.to_string())),
        }
    }
}

/// A set of first-index filters. `Base` is always applied.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct I1Rules {
    rules: BTreeSet<I1Rule>,
}

impl I1Rules {
    pub fn base() -> Self {
        Self::from_rules([I1Rule::Base])
    }

    /// All rules that are theorems: base and singular.
    pub fn proven() -> Self {
        Self::from_rules([I1Rule::Base, I1Rule::Singular])
    }

    /// Every rule, including the conjecture-conditional one.
    pub fn all() -> Self {
        Self::from_rules([I1Rule::Base, I1Rule::Singular, I1Rule::Conjectural])
    }

    pub fn from_rules<I: IntoIterator<Item = I1Rule>>(rules: I) -> Self {
        let mut rules: BTreeSet<I1Rule> = rules.into_iter().collect();
        rules.insert(I1Rule::Base);
        I1Rules { rules }
    }

    /// Parses a comma-separated list such as `base,singular`.
    /// Unknown names are rejected.
    pub fn parse(list: &str) -> Result<Self, ProfileError> {
        let rules = list
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(I1Rule::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_rules(rules))
    }

    pub fn contains(&self, rule: I1Rule) -> bool {
        self.rules.contains(&rule)
    }

    pub fn iter(&self) -> impl Iterator<Item = I1Rule> + '_ {
        self.rules.iter().copied()
    }
}

/// Data attached to a candidate `i` for a form of type `(r, s)`:
/// `u = v2(dim - i)` and the unique `x` with `x 2^u < r <= (x+1) 2^u`.
fn u_and_x(r: usize, s: usize, i: usize) -> (usize, usize) {
    let dim = 2 * r + s;
    let pu = two_part(dim - i);
    let x = (r - 1) / pu;
    (pu, x)
}

fn base_allows(r: usize, s: usize, i: usize) -> bool {
    let dim = 2 * r + s;
    if i == 0 || i > r || !step_within_i1_bound(dim, i) {
        return false;
    }
    let (pu, x) = u_and_x(r, s, i);
    let alpha = r - x * pu;
    // i <= 2 alpha + s - 2^u
    i + pu <= 2 * alpha + s
}

fn singular_allows(r: usize, s: usize, i: usize) -> bool {
    if i < s {
        return true;
    }
    let (pu, x) = u_and_x(r, s, i);
    let alpha = r - x * pu;
    s < pu && i <= alpha && alpha <= pu - s
}

fn conjectural_allows(r: usize, s: usize, i: usize) -> bool {
    let dim = 2 * r + s;
    let n = pfister_exponent(dim);
    let m = dim - (1usize << n);
    if r < m && i > m - r {
        return false;
    }
    let (pu, x) = u_and_x(r, s, i);
    let alpha = r - x * pu;
    if s < pu + i && alpha + s > pu {
        return false;
    }
    true
}

/// Values of the first higher index of a form of type `(r, s)` that are not
/// excluded by the selected rules.
pub fn i1_admissible_set(r: usize, s: usize, rules: &I1Rules) -> BTreeSet<usize> {
    assert!(r >= 1, "type (r, s) needs r >= 1");
    (1..=r)
        .filter(|&i| base_allows(r, s, i))
        .filter(|&i| !rules.contains(I1Rule::Singular) || singular_allows(r, s, i))
        .filter(|&i| !rules.contains(I1Rule::Conjectural) || conjectural_allows(r, s, i))
        .collect()
}

/// The unique expansion `value = 2^{n_1} - 2^{n_2} + ... + (-1)^{j-1} 2^{n_j}`
/// with `n_1 > ... > n_{j-1} > n_j + 1`, together with the partial sums `m_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingExpansion {
    pub value: usize,
    /// Exponents `n_1 > n_2 > ... > n_j`.
    pub n: Vec<u32>,
    /// `m_i = 2^{n_i - 1} - 2^{n_{i+1}} + ... + (-1)^{j-i} 2^{n_j}` for `1 <= i <= j'`.
    pub m: Vec<usize>,
    /// `j' = j` for even values, `j - 1` for odd values.
    pub j_prime: usize,
}

/// Computes the alternating 2-adic expansion of `value >= 1`.
pub fn alternating_2adic(value: usize) -> AlternatingExpansion {
    assert!(value >= 1, "alternating expansion needs a positive integer");
    let mut n = Vec::new();
    let mut rest = value;
    loop {
        if rest.is_power_of_two() {
            n.push(rest.trailing_zeros());
            break;
        }
        let top = usize::BITS - rest.leading_zeros();
        n.push(top);
        rest = (1usize << top) - rest;
    }
    let j = n.len();
    let j_prime = if value.is_multiple_of(2) { j } else { j - 1 };
    // Doubled tails avoid the half-integer at n_j = 0.
    let m = (0..j_prime)
        .map(|i| {
            let mut twice: i64 = 1i64 << n[i];
            for (k, &e) in n.iter().enumerate().skip(i + 1) {
                let sign = if (k - i) % 2 == 1 { -1 } else { 1 };
                twice += sign * (1i64 << (e + 1));
            }
            (twice / 2) as usize
        })
        .collect();
    AlternatingExpansion { value, n, m, j_prime }
}

/// An excellent index pair `(a, b)` with the witnessing index `k` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExcellentPair {
    pub a: usize,
    pub b: usize,
    pub k: usize,
}

/// Excellent pairs for a form of dimension `dim` with first type entry `r`,
/// restricted to the window `0 <= a < r`, `0 <= d_X - b < r`.
pub fn excellent_pairs_for(dim: usize, r: usize) -> Vec<ExcellentPair> {
    assert!(dim >= 2 && r >= 1 && 2 * r <= dim);
    let d = dim - 2;
    let exp = alternating_2adic(dim);
    let mut out = Vec::new();
    let mut before = 0usize;
    for k in 1..=exp.j_prime {
        let upto = before + exp.m[k - 1];
        let gap = (1usize << (exp.n[k - 1] - 1)) - 1;
        // b = a + gap; both a and d - b lie in [before, upto) and below r.
        for a in before..upto.min(r) {
            let b = a + gap;
            if b > d {
                break;
            }
            let c = d - b;
            if before <= c && c < upto && c < r {
                out.push(ExcellentPair { a, b, k });
            }
        }
        before = upto;
    }
    out.sort();
    out
}

/// Excellent pairs of a profile.
pub fn excellent_pairs(profile: &QuadricProfile) -> Vec<ExcellentPair> {
    excellent_pairs_for(profile.dim(), profile.r())
}

/// Builds the profile of a strongly excellent form from its exponent list
/// `n_1 > ... > n_h` and quasilinear dimension `s`.
///
/// Returns the profile together with the kernel dimensions
/// `[dim phi_0, dim phi_1, ..., dim phi_h]`, the last of which is `s`.
pub fn strongly_excellent_profile(n_list: &[u32], s: usize) -> Result<(QuadricProfile, Vec<usize>), ProfileError> {
    let bad = |msg: String| Err(ProfileError::ConstraintViolated(msg));
    let h = n_list.len();
    if h == 0 {
        return bad("exponent list is empty".into());
    }
    if n_list.windows(2).any(|w| w[0] <= w[1]) {
        return bad(format!("exponents {n_list:?} are not strictly decreasing"));
    }
    if n_list[0] >= usize::BITS - 2 {
        return bad(format!("exponent {} is too large", n_list[0]));
    }
    let last = n_list[h - 1];
    if last == 0 {
        return bad("the last exponent must be positive".into());
    }
    // n_h > log2(s) + 1, i.e. s < 2^{n_h - 1}; no bound when s = 0.
    if s > 0 && s >= 1usize << (last - 1) {
        return bad(format!(
            "gap condition fails: s = {s} needs 2^(n_h - 1) > s with n_h = {last}"
        ));
    }
    if s == 0 && h >= 2 && n_list[h - 2] <= last + 1 {
        return bad(format!(
            "with s = 0 the last two ambient Pfister dimensions must satisfy 2^{} > 2 * 2^{}",
            n_list[h - 2],
            last
        ));
    }
    // dim phi_i = 2^{n_{i+1}} - ... + (-1)^{h-1-i} 2^{n_h} + (-1)^{h-i} s
    let mut kernel_dims = vec![0i64; h + 1];
    kernel_dims[h] = s as i64;
    for i in (0..h).rev() {
        kernel_dims[i] = (1i64 << n_list[i]) - kernel_dims[i + 1];
    }
    let mut pattern = vec![0usize];
    for i in 0..h {
        let m = kernel_dims[i] - (1i64 << (n_list[i] - 1));
        if m <= 0 {
            return bad(format!("m_{} = {m} is not positive", i + 1));
        }
        pattern.push(pattern[i] + m as usize);
    }
    let dim = kernel_dims[0] as usize;
    let r = *pattern.last().unwrap();
    if 2 * r + s != dim {
        return bad(format!("pattern does not exhaust the type: 2*{r} + {s} != {dim}"));
    }
    let profile = QuadricProfile::new(dim, r, s, pattern)?;
    Ok((profile, kernel_dims.into_iter().map(|d| d as usize).collect()))
}

/// All splitting patterns of a form of type `(r, s)` whose steps are admissible
/// for the corresponding kernel types `(r - j_{t-1}, s)` under `rules`.
///
/// The output lists patterns that are not excluded; it makes no claim that
/// each one is realised by an actual form.
pub fn pattern_enumerate(r: usize, s: usize, rules: &I1Rules) -> Vec<Vec<usize>> {
    assert!(r >= 1, "type (r, s) needs r >= 1");
    let mut out = Vec::new();
    let mut prefix = vec![0usize];
    extend_patterns(r, s, rules, &mut prefix, &mut out);
    out.sort();
    out
}

fn extend_patterns(r: usize, s: usize, rules: &I1Rules, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let j = *prefix.last().unwrap();
    if j == r {
        out.push(prefix.clone());
        return;
    }
    for i in i1_admissible_set(r - j, s, rules) {
        prefix.push(j + i);
        extend_patterns(r, s, rules, prefix, out);
        prefix.pop();
    }
}

/// Numeric data attached to a potential Pfister neighbour of dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfisterNeighbourInvariants {
    /// `n` with `2^n < dim <= 2^{n+1}`.
    pub n: u32,
    /// `m = dim - 2^n`.
    pub m: usize,
    /// Dimension `2^{n+1} - dim` of the complementary form.
    pub complementary_dim: usize,
    /// Whether `dim = 2^{n+1} - s`.
    pub close_neighbour: bool,
}

/// Pfister-neighbour invariants for a form of dimension `dim` with quasilinear
/// part of dimension `s`. Fails when `r + s > 2^n`.
pub fn pfister_neighbour_invariants(dim: usize, s: usize) -> Result<PfisterNeighbourInvariants, ProfileError> {
    if dim < 2 || s > dim || !(dim - s).is_multiple_of(2) || dim - s < 2 {
        return Err(ProfileError::DimMismatch {
            dim,
            r: dim.saturating_sub(s) / 2,
            s,
        });
    }
    let r = (dim - s) / 2;
    let n = pfister_exponent(dim);
    let two_n = 1usize << n;
    if r + s > two_n {
        return Err(ProfileError::NotNeighbourEligible {
            dim,
            s,
            sum: r + s,
            two_n,
        });
    }
    Ok(PfisterNeighbourInvariants {
        n,
        m: dim - two_n,
        complementary_dim: 2 * two_n - dim,
        close_neighbour: dim + s == 2 * two_n,
    })
}
